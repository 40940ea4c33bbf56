#pragma once

#include <cstdint>
#include <vector>

#include "tcdc/bitvec.hpp"
#include "tcdc/job.hpp"
#include "tcdc/rational.hpp"

namespace tcdc {

// One coded shuffle transmission. A whole message (piece_j == 0) is the XOR
// of value segments, useful to every server in useful_mask and to nobody
// else. Switches may re-emit it cut into equal pieces: piece_j selects the
// j-th of t/2 pieces, piece_d the d-th sub-piece of that piece.
struct SubMessage {
  int sender = 0;          // server id, 1-based
  uint64_t useful_mask = 0;  // bit (k-1) set iff server k decodes from this
  int piece_j = 0;         // 0 = whole message
  int piece_d = 0;         // 0 = whole piece
  BitVec payload;
};

// All messages of one shuffle round, in (exchange-group, sender) order.
// Payload sizes are uniform: every group concatenates the same number of
// values, so every segment is seg_len bits (nominal_len of them carrying
// data, the rest zero fill when divisibility forces it).
struct MessageSet {
  std::vector<SubMessage> msgs;
  long long seg_len = 0;     // actual payload bits per message
  Rational nominal_len;      // data bits per message = |group values| / r
  long long granularity = 1; // seg_len is a multiple of this

  uint64_t total_bits() const;
  Rational total_nominal() const;
};

// Builds the s=1 exchange: for every (r+1)-subset A of servers, each member
// k needs the values mapped exactly by A\{k}; those are cut into r segments
// handed to the other members, and each sender in A transmits one XOR of the
// r segments it holds. piece_granularity forces seg_len to a multiple (the
// fat-tree route cuts each payload into (t/2)^2 equal sub-pieces).
// Throws UnsupportedCascade for s > 1.
MessageSet build_messages(const JobSpec& job, const Placement& placement,
                          const ReduceAssignment& assignment,
                          const IntermediateStore& store,
                          long long piece_granularity = 1);

// The messages server j must receive: exactly those with j in useful_mask.
struct UsefulSet {
  int server = 0;
  std::vector<const SubMessage*> msgs;
  uint64_t bits = 0;
  Rational nominal_bits;
};

UsefulSet useful_set(const MessageSet& messages, int j);

struct DecodeResult {
  long long values_recovered = 0;
  long long reduce_outputs_checked = 0;
};

// Peels each received XOR with locally mapped segments, reassembles every
// needed value, and verifies bit-exactness against the store plus the
// reduce-output checksums. Throws DecodeFailure on any mismatch, missing
// segment, or nonzero fill bits.
DecodeResult decode(const JobSpec& job, const Placement& placement,
                    const ReduceAssignment& assignment, const IntermediateStore& store,
                    int j, const std::vector<const SubMessage*>& received);

// Wire framing: sender (16-bit LE), useful mask (ceil(K/8) bytes), piece j
// and d (one byte each, 0xff when absent), payload length in bits (32-bit
// LE), payload packed LSB-first. Header bytes are bookkeeping, not load.
std::vector<uint8_t> frame_encode(const SubMessage& m, int K);
SubMessage frame_decode(const std::vector<uint8_t>& bytes, int K);

}  // namespace tcdc
