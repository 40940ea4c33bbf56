#include "tcdc/job.hpp"

#include <algorithm>
#include <string>

#include "tcdc/combinatorics.hpp"
#include "tcdc/hash.hpp"

namespace tcdc {

long long JobSpec::batch_count() const { return binomial(K, r); }
long long JobSpec::batch_size() const { return N / batch_count(); }
long long JobSpec::func_group_count() const { return binomial(K, s); }
long long JobSpec::func_group_size() const { return Q / func_group_count(); }
long long JobSpec::funcs_per_server() const { return Q * s / K; }

Rational JobSpec::total_bits() const {
  return Rational(Q) * Rational(N) * Rational(T);
}

JobSpec make_job(int K, int r, int s, long long N, long long Q, int T) {
  if (K < 1) throw RangeError("make_job: K must be >= 1, got " + std::to_string(K));
  if (r < 1 || r > K)
    throw RangeError("make_job: r must be in [1, K], got r=" + std::to_string(r) +
                     " with K=" + std::to_string(K));
  if (s < 1 || s > K)
    throw RangeError("make_job: s must be in [1, K], got s=" + std::to_string(s) +
                     " with K=" + std::to_string(K));
  if (N < 1) throw RangeError("make_job: N must be >= 1, got " + std::to_string(N));
  if (Q < 1) throw RangeError("make_job: Q must be >= 1, got " + std::to_string(Q));
  if (T < 1) throw RangeError("make_job: T must be >= 1, got " + std::to_string(T));
  long long bc = binomial(K, r);
  if (N % bc != 0)
    throw DivisibilityError("make_job: binom(K,r)=" + std::to_string(bc) +
                            " must divide N=" + std::to_string(N));
  long long fc = binomial(K, s);
  if (Q % fc != 0)
    throw DivisibilityError("make_job: binom(K,s)=" + std::to_string(fc) +
                            " must divide Q=" + std::to_string(Q));
  return JobSpec{K, r, s, N, Q, T};
}

Placement::Placement(const JobSpec& job) {
  eta_ = job.batch_size();
  subsets_ = subsets_colex(job.K, job.r);
  masks_.reserve(subsets_.size());
  for (const auto& sub : subsets_) masks_.push_back(subset_mask(sub));
  files_of_.assign(job.K, {});
  for (long long b = 0; b < static_cast<long long>(subsets_.size()); ++b)
    for (int k : subsets_[b])
      for (long long n = first_file(b); n <= (b + 1) * eta_; ++n)
        files_of_[k - 1].push_back(n);
}

Placement place_files(const JobSpec& job) { return Placement(job); }

ReduceAssignment::ReduceAssignment(const JobSpec& job) {
  per_group_ = job.func_group_size();
  subsets_ = subsets_colex(job.K, job.s);
  masks_.reserve(subsets_.size());
  for (const auto& sub : subsets_) masks_.push_back(subset_mask(sub));
  funcs_of_.assign(job.K, {});
  for (long long b = 0; b < static_cast<long long>(subsets_.size()); ++b)
    for (int k : subsets_[b])
      for (long long q = b * per_group_ + 1; q <= (b + 1) * per_group_; ++q)
        funcs_of_[k - 1].push_back(q);
}

ReduceAssignment assign_reducers(const JobSpec& job) { return ReduceAssignment(job); }

BitVec IntermediateStore::value(long long q, long long n) const {
  uint64_t key = hash_combine(hash_combine(seed_, uint64_t(q)), uint64_t(n));
  BitVec out(job_.T);
  int words = (job_.T + 63) / 64;
  for (int w = 0; w < words; ++w) {
    uint64_t bits = mix64(key + uint64_t(w) * 0xd1b54a32d192ed03ULL);
    int lo = w * 64;
    int hi = std::min(lo + 64, job_.T);
    for (int i = lo; i < hi; ++i)
      if ((bits >> (i - lo)) & 1) out.set(i, true);
  }
  return out;
}

uint64_t IntermediateStore::reduce_output(long long q) const {
  uint64_t h = kFnvOffset;
  for (long long n = 1; n <= job_.N; ++n) h = value(q, n).fnv_into(h);
  return h;
}

IntermediateStore map_phase(const JobSpec& job, const Placement& placement, uint64_t seed) {
  // Sanity: the placement must realize computation load r exactly.
  long long stored = 0;
  for (int k = 1; k <= job.K; ++k) stored += static_cast<long long>(placement.files_of(k).size());
  if (stored != static_cast<long long>(job.r) * job.N)
    throw Error("map_phase: placement stores " + std::to_string(stored) +
                " file copies, expected r*N=" + std::to_string(job.r * job.N));
  return IntermediateStore(job, seed);
}

std::vector<std::pair<long long, long long>> needed_values(const JobSpec& job,
                                                           const Placement& placement,
                                                           const ReduceAssignment& assignment,
                                                           int k) {
  if (k < 1 || k > job.K) throw RangeError("needed_values: server out of range");
  std::vector<std::pair<long long, long long>> out;
  for (long long q : assignment.funcs_of(k))
    for (long long n = 1; n <= job.N; ++n)
      if (!placement.stores(k, n)) out.emplace_back(q, n);
  return out;
}

}  // namespace tcdc
