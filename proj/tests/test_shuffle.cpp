#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "tcdc/bounds.hpp"
#include "tcdc/combinatorics.hpp"
#include "tcdc/shuffle.hpp"

using namespace tcdc;

namespace {

struct Rig {
  JobSpec job;
  Placement pl;
  ReduceAssignment ra;
  IntermediateStore store;

  Rig(int K, int r, int s, long long N, long long Q, int T, uint64_t seed = 1)
      : job(make_job(K, r, s, N, Q, T)),
        pl(job),
        ra(job),
        store(map_phase(job, pl, seed)) {}
};

std::vector<const SubMessage*> useful_ptrs(const MessageSet& ms, int j) {
  return useful_set(ms, j).msgs;
}

}  // namespace

TEST_CASE("three servers, load two: payloads match a by-hand construction") {
  Rig rig(3, 2, 1, 3, 3, 6);
  MessageSet ms = build_messages(rig.job, rig.pl, rig.ra, rig.store);

  REQUIRE(ms.msgs.size() == 3);  // one exchange group, every member sends once
  CHECK(ms.seg_len == 3);
  CHECK(ms.nominal_len == Rational(3));

  // The values each member of {1,2,3} misses, cut into halves of 3 bits; each
  // half goes to one of the other two servers, smaller id first.
  BitVec v13 = rig.store.value(1, 3);  // needed by server 1, mapped by {2,3}
  BitVec v22 = rig.store.value(2, 2);  // needed by server 2, mapped by {1,3}
  BitVec v31 = rig.store.value(3, 1);  // needed by server 3, mapped by {1,2}

  BitVec m1 = v22.slice(0, 3);  // server 1 holds files 1,2: first halves
  m1.xor_with(v31.slice(0, 3));
  BitVec m2 = v13.slice(0, 3);  // server 2 holds files 1,3
  m2.xor_with(v31.slice(3, 3));
  BitVec m3 = v13.slice(3, 3);  // server 3 holds files 2,3
  m3.xor_with(v22.slice(3, 3));

  CHECK(ms.msgs[0].sender == 1);
  CHECK(ms.msgs[0].useful_mask == 0b110);
  CHECK(ms.msgs[0].payload == m1);
  CHECK(ms.msgs[1].sender == 2);
  CHECK(ms.msgs[1].useful_mask == 0b101);
  CHECK(ms.msgs[1].payload == m2);
  CHECK(ms.msgs[2].sender == 3);
  CHECK(ms.msgs[2].useful_mask == 0b011);
  CHECK(ms.msgs[2].payload == m3);

  // Each server peels with its local halves and recovers its missing value.
  for (int j = 1; j <= 3; ++j) {
    DecodeResult res = decode(rig.job, rig.pl, rig.ra, rig.store, j, useful_ptrs(ms, j));
    CHECK(res.values_recovered == 1);
    CHECK(res.reduce_outputs_checked == 1);
  }
}

TEST_CASE("every message is useful to exactly r servers, never its sender") {
  for (int K = 3; K <= 6; ++K)
    for (int r = 1; r < K; ++r) {
      Rig rig(K, r, 1, binomial(K, r), K, 8);
      MessageSet ms = build_messages(rig.job, rig.pl, rig.ra, rig.store);
      CHECK((long long)ms.msgs.size() == (r + 1) * binomial(K, r + 1));
      for (const SubMessage& m : ms.msgs) {
        CHECK(__builtin_popcountll(m.useful_mask) == r);
        CHECK(((m.useful_mask >> (m.sender - 1)) & 1) == 0);
        CHECK((long long)m.payload.size() == ms.seg_len);
      }
    }
}

TEST_CASE("sent and received shares match the optimal total load") {
  for (int K = 3; K <= 6; ++K)
    for (int r = 1; r < K; ++r)
      for (long long eta : {1, 2}) {
        Rig rig(K, r, 1, binomial(K, r) * eta, 2 * K, 12);
        MessageSet ms = build_messages(rig.job, rig.pl, rig.ra, rig.store);
        Rational total = l_star(K, r, 1) * rig.job.total_bits();
        CHECK(ms.total_nominal() == total);

        Rational share = total / Rational(K);
        for (int j = 1; j <= K; ++j) {
          Rational sent;
          for (const SubMessage& m : ms.msgs)
            if (m.sender == j) sent += ms.nominal_len;
          CHECK(sent == share);                            // uplink share
          CHECK(useful_set(ms, j).nominal_bits == share * Rational(r));  // downlink need
        }
      }
}

TEST_CASE("sixteen servers: the frozen bit counts") {
  Rig rig(16, 2, 1, 120, 16, 64);
  MessageSet ms = build_messages(rig.job, rig.pl, rig.ra, rig.store);
  CHECK(ms.seg_len == 32);
  CHECK(ms.nominal_len == Rational(32));  // no fill: 64 splits evenly in two
  CHECK(ms.msgs.size() == 1680);          // 3 * binom(16,3)
  for (int j : {1, 7, 16}) {
    UsefulSet u = useful_set(ms, j);
    CHECK(u.msgs.size() == 210);  // r * binom(15,2)
    CHECK(u.bits == 6720);        // everything this server still needs
    uint64_t sent = 0;
    for (const SubMessage& m : ms.msgs)
      if (m.sender == j) sent += m.payload.size();
    CHECK(sent == 3360);          // half of the uncoded 6720
  }
}

TEST_CASE("decoding succeeds across a parameter grid") {
  for (int K = 3; K <= 5; ++K)
    for (int r = 1; r < K; ++r)
      for (int T : {8, 5}) {
        Rig rig(K, r, 1, binomial(K, r) * 2, 2 * K, T, 99);
        MessageSet ms = build_messages(rig.job, rig.pl, rig.ra, rig.store);
        for (int j = 1; j <= K; ++j) {
          auto needed = needed_values(rig.job, rig.pl, rig.ra, j);
          DecodeResult res = decode(rig.job, rig.pl, rig.ra, rig.store, j, useful_ptrs(ms, j));
          CHECK(res.values_recovered == (long long)needed.size());
          CHECK(res.reduce_outputs_checked == 2);  // |W_j| = Q/K
        }
      }
}

TEST_CASE("any single flipped bit in any useful payload breaks decoding") {
  Rig rig(4, 2, 1, 6, 4, 8);
  MessageSet ms = build_messages(rig.job, rig.pl, rig.ra, rig.store);
  for (int j = 1; j <= 4; ++j) {
    auto received = useful_ptrs(ms, j);
    REQUIRE(decode(rig.job, rig.pl, rig.ra, rig.store, j, received).values_recovered == 3);
    for (size_t mi = 0; mi < received.size(); ++mi) {
      for (size_t bit = 0; bit < received[mi]->payload.size(); ++bit) {
        SubMessage tampered = *received[mi];
        tampered.payload.flip(bit);
        auto with_flip = received;
        with_flip[mi] = &tampered;
        CHECK_THROWS_AS(decode(rig.job, rig.pl, rig.ra, rig.store, j, with_flip), DecodeFailure);
      }
    }
  }
}

TEST_CASE("missing, foreign, duplicated or resized messages break decoding") {
  Rig rig(4, 2, 1, 6, 4, 8);
  MessageSet ms = build_messages(rig.job, rig.pl, rig.ra, rig.store);
  int j = 2;
  auto received = useful_ptrs(ms, j);

  for (size_t drop = 0; drop < received.size(); ++drop) {
    auto partial = received;
    partial.erase(partial.begin() + (long)drop);
    CHECK_THROWS_AS(decode(rig.job, rig.pl, rig.ra, rig.store, j, partial), DecodeFailure);
  }

  // A message this server does not appear in.
  const SubMessage* foreign = nullptr;
  for (const SubMessage& m : ms.msgs)
    if (!((m.useful_mask >> (j - 1)) & 1)) foreign = &m;
  REQUIRE(foreign != nullptr);
  auto with_foreign = received;
  with_foreign.push_back(foreign);
  CHECK_THROWS_AS(decode(rig.job, rig.pl, rig.ra, rig.store, j, with_foreign), DecodeFailure);

  auto doubled = received;
  doubled.push_back(received[0]);
  CHECK_THROWS_AS(decode(rig.job, rig.pl, rig.ra, rig.store, j, doubled), DecodeFailure);

  SubMessage longer = *received[0];
  longer.payload.append_zeros(8);
  auto resized = received;
  resized[0] = &longer;
  CHECK_THROWS_AS(decode(rig.job, rig.pl, rig.ra, rig.store, j, resized), DecodeFailure);

  SubMessage piece = *received[0];
  piece.piece_j = 1;
  auto unassembled = received;
  unassembled[0] = &piece;
  CHECK_THROWS_AS(decode(rig.job, rig.pl, rig.ra, rig.store, j, unassembled), DecodeFailure);
}

TEST_CASE("granularity rounds segments up and decoding strips the fill") {
  // 5-bit values split across r=2 senders in 4-bit aligned segments: 3 of
  // the 8 transported bits are zero fill.
  Rig rig(4, 2, 1, 6, 4, 5);
  MessageSet ms = build_messages(rig.job, rig.pl, rig.ra, rig.store, 4);
  CHECK(ms.seg_len == 4);
  CHECK(ms.granularity == 4);
  CHECK(ms.nominal_len == Rational(5, 2));
  CHECK(ms.total_nominal() == l_star(4, 2, 1) * rig.job.total_bits());
  for (int j = 1; j <= 4; ++j) {
    DecodeResult res = decode(rig.job, rig.pl, rig.ra, rig.store, j, useful_ptrs(ms, j));
    CHECK(res.values_recovered == 3);
  }
  // The fill is protected too: flipping any fill bit must be detected.
  auto received = useful_ptrs(ms, 1);
  for (size_t mi = 0; mi < received.size(); ++mi)
    for (size_t bit = 0; bit < 4; ++bit) {
      SubMessage tampered = *received[mi];
      tampered.payload.flip(bit);
      auto with_flip = received;
      with_flip[mi] = &tampered;
      CHECK_THROWS_AS(decode(rig.job, rig.pl, rig.ra, rig.store, 1, with_flip), DecodeFailure);
    }
}

TEST_CASE("full replication leaves nothing to send or decode") {
  Rig rig(3, 3, 1, 1, 3, 8);
  MessageSet ms = build_messages(rig.job, rig.pl, rig.ra, rig.store);
  CHECK(ms.msgs.empty());
  CHECK(ms.total_bits() == 0);
  for (int j = 1; j <= 3; ++j) {
    DecodeResult res = decode(rig.job, rig.pl, rig.ra, rig.store, j, {});
    CHECK(res.values_recovered == 0);
    CHECK(res.reduce_outputs_checked == 1);
  }
}

TEST_CASE("coded payload construction is limited to one reducer per function") {
  Rig rig(4, 2, 2, 6, 6, 8);
  CHECK_THROWS_AS(build_messages(rig.job, rig.pl, rig.ra, rig.store), UnsupportedCascade);
}

TEST_CASE("wire framing round-trips") {
  std::mt19937_64 rng(23);
  for (int K : {3, 8, 9, 16, 64}) {
    for (int it = 0; it < 50; ++it) {
      SubMessage m;
      m.sender = int(rng() % K) + 1;
      uint64_t all = K == 64 ? ~uint64_t(0) : (uint64_t(1) << K) - 1;
      m.useful_mask = rng() & all & ~(uint64_t(1) << (m.sender - 1));
      m.piece_j = int(rng() % 3);
      m.piece_d = m.piece_j == 0 ? 0 : int(rng() % 3);
      size_t len = rng() % 70;
      m.payload = BitVec(len);
      for (size_t i = 0; i < len; ++i) m.payload.set(i, rng() & 1);

      std::vector<uint8_t> wire = frame_encode(m, K);
      CHECK(wire.size() == 2 + size_t(K + 7) / 8 + 2 + 4 + (len + 7) / 8);
      SubMessage back = frame_decode(wire, K);
      CHECK(back.sender == m.sender);
      CHECK(back.useful_mask == m.useful_mask);
      CHECK(back.piece_j == m.piece_j);
      CHECK(back.piece_d == m.piece_d);
      CHECK(back.payload == m.payload);
    }
  }
}

TEST_CASE("malformed frames are rejected") {
  SubMessage m;
  m.sender = 2;
  m.useful_mask = 0b101;
  m.payload = BitVec(10);
  m.payload.set(3, true);
  std::vector<uint8_t> wire = frame_encode(m, 8);

  std::vector<uint8_t> truncated(wire.begin(), wire.end() - 1);
  CHECK_THROWS_AS(frame_decode(truncated, 8), RangeError);

  std::vector<uint8_t> padded = wire;
  padded.push_back(0);
  CHECK_THROWS_AS(frame_decode(padded, 8), RangeError);

  std::vector<uint8_t> dirty = wire;
  dirty.back() |= 0x80;  // bit 15 of a 10-bit payload
  CHECK_THROWS_AS(frame_decode(dirty, 8), RangeError);

  SubMessage wide;
  wide.sender = 1;
  wide.useful_mask = uint64_t(1) << 8;  // server 9 of 8
  CHECK_THROWS_AS(frame_encode(wide, 8), RangeError);
  CHECK_THROWS_AS(frame_decode(wire, 999), RangeError);
}
