#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tcdc/bitvec.hpp"
#include "tcdc/errors.hpp"
#include "tcdc/rational.hpp"

namespace tcdc {

// One distributed map/shuffle/reduce job. Servers, files and functions are
// 1-based ids; every intermediate value carries T bits.
struct JobSpec {
  int K = 0;        // servers
  int r = 0;        // computation load: each file is mapped by r servers
  int s = 0;        // servers reducing each function
  long long N = 0;  // input files
  long long Q = 0;  // output functions
  int T = 0;        // bits per intermediate value

  long long batch_count() const;      // binom(K, r)
  long long batch_size() const;       // N / binom(K, r)
  long long func_group_count() const; // binom(K, s)
  long long func_group_size() const;  // Q / binom(K, s)
  long long funcs_per_server() const; // Q*s/K
  Rational total_bits() const;        // Q*N*T, the load normalizer
};

// Validates ranges and the divisibility structure; throws RangeError /
// DivisibilityError with the offending quantity named.
JobSpec make_job(int K, int r, int s, long long N, long long Q, int T);

// Files grouped into batches of N/binom(K,r), one batch per r-subset of
// servers in colex order; batch b holds files [b*eta+1, (b+1)*eta].
class Placement {
 public:
  explicit Placement(const JobSpec& job);

  long long batch_count() const { return static_cast<long long>(subsets_.size()); }
  long long batch_size() const { return eta_; }
  const std::vector<int>& batch_subset(long long b) const { return subsets_[b]; }
  uint64_t batch_servers_mask(long long b) const { return masks_[b]; }
  long long first_file(long long b) const { return b * eta_ + 1; }

  long long file_batch(long long n) const { return (n - 1) / eta_; }
  bool stores(int k, long long n) const {
    return (masks_[file_batch(n)] >> (k - 1)) & 1;
  }

  // M_k, ascending.
  const std::vector<long long>& files_of(int k) const { return files_of_[k - 1]; }

 private:
  long long eta_;
  std::vector<std::vector<int>> subsets_;
  std::vector<uint64_t> masks_;
  std::vector<std::vector<long long>> files_of_;
};

Placement place_files(const JobSpec& job);

// Functions grouped per s-subset of servers in colex order; the servers of a
// subset all reduce that group's functions.
class ReduceAssignment {
 public:
  explicit ReduceAssignment(const JobSpec& job);

  long long group_size() const { return per_group_; }
  const std::vector<int>& servers_of(long long q) const {
    return subsets_[(q - 1) / per_group_];
  }
  uint64_t servers_mask_of(long long q) const { return masks_[(q - 1) / per_group_]; }
  bool reduces(int k, long long q) const {
    return (servers_mask_of(q) >> (k - 1)) & 1;
  }

  // W_k, ascending.
  const std::vector<long long>& funcs_of(int k) const { return funcs_of_[k - 1]; }

 private:
  long long per_group_;
  std::vector<std::vector<int>> subsets_;
  std::vector<uint64_t> masks_;
  std::vector<std::vector<long long>> funcs_of_;
};

ReduceAssignment assign_reducers(const JobSpec& job);

// Deterministic source of every intermediate value: v(q, n) is a keyed
// pseudo-random T-bit string, so any two servers mapping file n agree on it
// and tests can recompute values independently of any shuffle path.
class IntermediateStore {
 public:
  IntermediateStore(const JobSpec& job, uint64_t seed) : job_(job), seed_(seed) {}

  const JobSpec& job() const { return job_; }
  uint64_t seed() const { return seed_; }

  BitVec value(long long q, long long n) const;

  // Checksum standing in for the reduce output u_q = h_q(v_{q,1..N}); a
  // reducer can only reproduce it once it holds every input value.
  uint64_t reduce_output(long long q) const;

 private:
  JobSpec job_;
  uint64_t seed_;
};

// The map phase: after it, server k can evaluate value(q, n) for n in M_k.
IntermediateStore map_phase(const JobSpec& job, const Placement& placement, uint64_t seed);

// All (q, n) pairs server k must obtain in the shuffle: q in W_k, n not in
// M_k. Ascending (q, n).
std::vector<std::pair<long long, long long>> needed_values(const JobSpec& job,
                                                           const Placement& placement,
                                                           const ReduceAssignment& assignment,
                                                           int k);

}  // namespace tcdc
