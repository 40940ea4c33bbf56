#include "tcdc/shuffle.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "tcdc/combinatorics.hpp"
#include "tcdc/hash.hpp"

namespace tcdc {

namespace {

// Position of v inside the ascending set `sorted`.
int position_of(const std::vector<int>& sorted, int v) {
  return int(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
}

std::string pair_str(long long q, long long n) {
  return "(q=" + std::to_string(q) + ", n=" + std::to_string(n) + ")";
}

// Bits [c*seg_len, (c+1)*seg_len) of the zero-filled concatenation of the
// values server k owes the members of A\{k}: q over W_k ascending, n over
// the batch of A\{k} ascending. c is the slot of receiver-index j in A\{k}.
// When require_local_to is nonzero, every touched file must be mapped by
// that server (the decoder may only peel with values it holds itself).
BitVec group_segment(const JobSpec& job, const Placement& pl, const ReduceAssignment& ra,
                     const IntermediateStore& store, const std::vector<int>& A, int k, int j,
                     long long seg_len, int require_local_to) {
  std::vector<int> rest;
  rest.reserve(A.size() - 1);
  for (int v : A)
    if (v != k) rest.push_back(v);
  long long c = position_of(rest, j);

  long long eta = pl.batch_size();
  long long batch = colex_rank(rest);
  long long base_file = pl.first_file(batch);
  const std::vector<long long>& funcs = ra.funcs_of(k);
  long long vbits = static_cast<long long>(funcs.size()) * eta * job.T;

  BitVec out(seg_len);
  long long lo = c * seg_len;
  long long hi = std::min(lo + seg_len, vbits);
  long long vi = lo / job.T;
  for (long long off = vi * job.T; off < hi; off += job.T, ++vi) {
    long long q = funcs[vi / eta];
    long long n = base_file + (vi % eta);
    if (require_local_to != 0 && !pl.stores(require_local_to, n))
      throw Error("group_segment: peeling would need a value the server never mapped " +
                  pair_str(q, n));
    BitVec v = store.value(q, n);
    long long from = std::max(lo, off);
    long long to = std::min(hi, off + job.T);
    for (long long b = from; b < to; ++b)
      if (v.get(b - off)) out.set(b - lo, true);
  }
  return out;
}

}  // namespace

uint64_t MessageSet::total_bits() const {
  return static_cast<uint64_t>(msgs.size()) * static_cast<uint64_t>(seg_len);
}

Rational MessageSet::total_nominal() const {
  return nominal_len * Rational(static_cast<long long>(msgs.size()));
}

MessageSet build_messages(const JobSpec& job, const Placement& placement,
                          const ReduceAssignment& assignment, const IntermediateStore& store,
                          long long piece_granularity) {
  if (job.s != 1)
    throw UnsupportedCascade("build_messages: coded payloads are constructed for s=1 only "
                             "(requested s=" + std::to_string(job.s) + ")");
  if (job.K > 64) throw RangeError("build_messages: payload simulation supports K <= 64");
  if (piece_granularity < 1) throw RangeError("build_messages: granularity must be >= 1");

  MessageSet out;
  out.granularity = piece_granularity;
  if (job.r == job.K) return out;  // nothing missing anywhere, no exchange

  long long eta = job.batch_size();
  long long vbits = job.funcs_per_server() * eta * job.T;
  long long rg = static_cast<long long>(job.r) * piece_granularity;
  out.seg_len = piece_granularity * ((vbits + rg - 1) / rg);
  out.nominal_len = Rational(vbits) / Rational(job.r);

  for (const auto& A : subsets_colex(job.K, job.r + 1)) {
    uint64_t amask = subset_mask(A);
    for (int j : A) {
      SubMessage m;
      m.sender = j;
      m.useful_mask = amask & ~(uint64_t(1) << (j - 1));
      m.payload = BitVec(static_cast<size_t>(out.seg_len));
      for (int k : A)
        if (k != j)
          m.payload.xor_with(
              group_segment(job, placement, assignment, store, A, k, j, out.seg_len, 0));
      out.msgs.push_back(std::move(m));
    }
  }
  return out;
}

UsefulSet useful_set(const MessageSet& messages, int j) {
  UsefulSet out;
  out.server = j;
  uint64_t bit = uint64_t(1) << (j - 1);
  for (const auto& m : messages.msgs)
    if (m.useful_mask & bit) {
      out.msgs.push_back(&m);
      out.bits += m.payload.size();
      out.nominal_bits += messages.nominal_len;
    }
  return out;
}

DecodeResult decode(const JobSpec& job, const Placement& placement,
                    const ReduceAssignment& assignment, const IntermediateStore& store, int j,
                    const std::vector<const SubMessage*>& received) {
  if (j < 1 || j > job.K) throw RangeError("decode: server out of range");
  uint64_t jbit = uint64_t(1) << (j - 1);
  long long eta = job.batch_size();
  const std::vector<long long>& my_funcs = assignment.funcs_of(j);
  long long vbits = static_cast<long long>(my_funcs.size()) * eta * job.T;

  struct Group {
    std::vector<BitVec> chunk;
    std::vector<bool> have;
  };
  std::map<uint64_t, Group> groups;  // keyed by the exchange subset A

  long long seg_len = received.empty() ? 0 : static_cast<long long>(received[0]->payload.size());
  for (const SubMessage* m : received) {
    if (!(m->useful_mask & jbit))
      throw DecodeFailure("decode: server " + std::to_string(j) +
                          " received a message it cannot use");
    if (m->piece_j != 0 || m->piece_d != 0)
      throw DecodeFailure("decode: received an unassembled piece");
    if (static_cast<long long>(m->payload.size()) != seg_len)
      throw DecodeFailure("decode: inconsistent payload sizes");

    uint64_t amask = m->useful_mask | (uint64_t(1) << (m->sender - 1));
    std::vector<int> A = mask_to_subset(amask);
    if (static_cast<int>(A.size()) != job.r + 1)
      throw DecodeFailure("decode: exchange group has wrong size");

    // Peel everyone else's segment; all those files are mapped locally.
    BitVec peeled = m->payload;
    for (int k : A)
      if (k != j && k != m->sender)
        peeled.xor_with(
            group_segment(job, placement, assignment, store, A, k, m->sender, seg_len, j));

    std::vector<int> mine;  // A \ {j}: slot owners of my own segments
    for (int v : A)
      if (v != j) mine.push_back(v);
    int slot = position_of(mine, m->sender);

    Group& g = groups[amask];
    if (g.chunk.empty()) {
      g.chunk.resize(job.r);
      g.have.assign(job.r, false);
    }
    if (g.have[slot])
      throw DecodeFailure("decode: duplicate segment from sender " + std::to_string(m->sender));
    g.chunk[slot] = std::move(peeled);
    g.have[slot] = true;
  }

  auto needed = needed_values(job, placement, assignment, j);
  std::map<std::pair<long long, long long>, BitVec> recovered;

  for (auto& [amask, g] : groups) {
    for (int c = 0; c < job.r; ++c)
      if (!g.have[c])
        throw DecodeFailure("decode: missing segment " + std::to_string(c) +
                            " of group mask " + std::to_string(amask));
    BitVec vpad;
    for (int c = 0; c < job.r; ++c) vpad.append(g.chunk[c]);
    if (static_cast<long long>(vpad.size()) < vbits)
      throw DecodeFailure("decode: group shorter than its data");
    if (!vpad.zero_range(vbits, vpad.size() - vbits))
      throw DecodeFailure("decode: nonzero fill bits");

    std::vector<int> rest = mask_to_subset(amask & ~jbit);
    long long base_file = placement.first_file(colex_rank(rest));
    for (long long vi = 0; vi * job.T < vbits; ++vi) {
      long long q = my_funcs[vi / eta];
      long long n = base_file + (vi % eta);
      BitVec v = vpad.slice(static_cast<size_t>(vi * job.T), job.T);
      if (v != store.value(q, n))
        throw DecodeFailure("decode: recovered value differs from mapped value " + pair_str(q, n));
      recovered.emplace(std::make_pair(q, n), std::move(v));
    }
  }

  if (recovered.size() != needed.size())
    throw DecodeFailure("decode: recovered " + std::to_string(recovered.size()) +
                        " values, needed " + std::to_string(needed.size()));
  for (const auto& qn : needed)
    if (recovered.find(qn) == recovered.end())
      throw DecodeFailure("decode: missing needed value " + pair_str(qn.first, qn.second));

  // Reduce witness: fold local + recovered values exactly as the store does.
  DecodeResult res;
  res.values_recovered = static_cast<long long>(recovered.size());
  for (long long q : my_funcs) {
    uint64_t h = kFnvOffset;
    for (long long n = 1; n <= job.N; ++n) {
      if (placement.stores(j, n))
        h = store.value(q, n).fnv_into(h);
      else
        h = recovered.at({q, n}).fnv_into(h);
    }
    if (h != store.reduce_output(q))
      throw DecodeFailure("decode: reduce output mismatch for function " + std::to_string(q));
    ++res.reduce_outputs_checked;
  }
  return res;
}

std::vector<uint8_t> frame_encode(const SubMessage& m, int K) {
  if (K < 1 || K > 64) throw RangeError("frame_encode: K out of range");
  if (m.sender < 0 || m.sender > 0xffff) throw RangeError("frame_encode: sender out of range");
  if (m.piece_j < 0 || m.piece_j > 0xfe || m.piece_d < 0 || m.piece_d > 0xfe)
    throw RangeError("frame_encode: piece coordinate out of range");
  if (K < 64 && (m.useful_mask >> K) != 0)
    throw RangeError("frame_encode: mask wider than K");

  std::vector<uint8_t> out;
  out.push_back(uint8_t(m.sender & 0xff));
  out.push_back(uint8_t(m.sender >> 8));
  int mask_bytes = (K + 7) / 8;
  for (int b = 0; b < mask_bytes; ++b) out.push_back(uint8_t(m.useful_mask >> (8 * b)));
  out.push_back(m.piece_j == 0 ? 0xff : uint8_t(m.piece_j));
  out.push_back(m.piece_d == 0 ? 0xff : uint8_t(m.piece_d));
  uint32_t len = uint32_t(m.payload.size());
  for (int b = 0; b < 4; ++b) out.push_back(uint8_t(len >> (8 * b)));
  size_t payload_bytes = (m.payload.size() + 7) / 8;
  size_t base = out.size();
  out.resize(base + payload_bytes, 0);
  for (size_t i = 0; i < m.payload.size(); ++i)
    if (m.payload.get(i)) out[base + i / 8] |= uint8_t(1) << (i % 8);
  return out;
}

SubMessage frame_decode(const std::vector<uint8_t>& bytes, int K) {
  if (K < 1 || K > 64) throw RangeError("frame_decode: K out of range");
  size_t mask_bytes = size_t(K + 7) / 8;
  size_t header = 2 + mask_bytes + 2 + 4;
  if (bytes.size() < header) throw RangeError("frame_decode: truncated header");

  SubMessage m;
  m.sender = bytes[0] | (int(bytes[1]) << 8);
  for (size_t b = 0; b < mask_bytes; ++b) m.useful_mask |= uint64_t(bytes[2 + b]) << (8 * b);
  if (K < 64 && (m.useful_mask >> K) != 0)
    throw RangeError("frame_decode: mask wider than K");
  uint8_t pj = bytes[2 + mask_bytes], pd = bytes[3 + mask_bytes];
  m.piece_j = pj == 0xff ? 0 : pj;
  m.piece_d = pd == 0xff ? 0 : pd;
  uint32_t len = 0;
  for (int b = 0; b < 4; ++b) len |= uint32_t(bytes[4 + mask_bytes + b]) << (8 * b);
  if (bytes.size() != header + (len + 7) / 8)
    throw RangeError("frame_decode: payload length mismatch");
  m.payload = BitVec(len);
  for (uint32_t i = 0; i < len; ++i)
    if ((bytes[header + i / 8] >> (i % 8)) & 1) m.payload.set(i, true);
  for (uint32_t i = len; i < 8 * (bytes.size() - header); ++i)
    if ((bytes[header + i / 8] >> (i % 8)) & 1)
      throw RangeError("frame_decode: nonzero trailing bits");
  return m;
}

}  // namespace tcdc
