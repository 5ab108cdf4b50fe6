#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fedscreen/framing.hpp"
#include "fedscreen/wire.hpp"
#include "support/generators.hpp"
#include "support/golden.hpp"

using namespace fedscreen;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::size_t protocol_offset(const std::string& bytes) {
  try {
    decode_update(bytes);
  } catch (const ProtocolError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no ProtocolError for " << bytes;
  return 0;
}

}  // namespace

TEST(Wire, UpdatesRoundTrip) {
  Rng rng(61);
  for (int trial = 0; trial < 1000; ++trial) {
    const ClientUpdate u = testgen::random_update(rng);
    const int round = static_cast<int>(rng.uniform_below(50));
    const std::string bytes = encode_update(u, round);
    ASSERT_EQ(decode_update(bytes), u) << bytes;
    ASSERT_EQ(decode_message(bytes).round_index, round);
    ASSERT_EQ(encode_update(decode_update(bytes), round), bytes);
  }
}

TEST(Wire, OtherMessagesRoundTrip) {
  Rng rng(62);
  for (int trial = 0; trial < 100; ++trial) {
    const LabeledMatrix m = testgen::random_matrix(rng, 5 + rng.uniform_below(20), 3);
    const Registration reg{kAllSources[trial % 4], m.rows(), SufficientStats::of(m)};
    ASSERT_EQ(decode_registration(encode_registration(reg)), reg);

    Broadcast b{std::nullopt, reg.stats.finalize(), 1 + rng.uniform_below(1000),
                static_cast<int>(rng.uniform_below(30))};
    if (trial % 2) b.global = std::get<LinearSvcModel>(testgen::random_update(rng).params = LinearSvcModel{
                                  {1.0, 2.0, 3.0}, 0.5, 1.0, b.standardization.means, b.standardization.scales});
    ASSERT_EQ(decode_broadcast(encode_broadcast(b, trial)), b);

    std::vector<ClientUpdate> members;
    for (SourceId id : kAllSources) members.push_back({id, testgen::random_tree(rng, 3, 2), 1 + rng.uniform_below(9), 0.5, std::nullopt});
    const GlobalModel g(meta_aggregate(members));
    ASSERT_EQ(decode_complete(encode_complete(g, 1)), g);
  }
}

TEST(Wire, GoldenFixtureDecodesToPinnedUpdate) {
  const std::string bytes = read_file(FEDSCREEN_TEST_DATA_DIR "/golden_update.json");
  ASSERT_FALSE(bytes.empty());
  EXPECT_EQ(decode_update(bytes), testgen::golden_update());
  EXPECT_EQ(decode_message(bytes).round_index, testgen::kGoldenRound);
  EXPECT_EQ(encode_update(testgen::golden_update(), testgen::kGoldenRound), bytes);
}

TEST(Wire, TruncationIsAProtocolError) {
  const std::string bytes = encode_update(testgen::golden_update(), 1);
  for (std::size_t cut = 0; cut < bytes.size(); ++cut) {
    EXPECT_THROW(decode_update(bytes.substr(0, cut)), ProtocolError) << cut;
  }
  EXPECT_EQ(protocol_offset(bytes.substr(0, 40)), 40u);  // where the input ran out
  EXPECT_EQ(protocol_offset("{\"a\":}"), 5u);
}

TEST(Wire, EnvelopeChecks) {
  const std::string good = encode_update(testgen::golden_update(), 1);
  std::string v2 = good;
  v2.replace(v2.find("\"version\":1"), 11, "\"version\":2");
  EXPECT_THROW(decode_message(v2), ProtocolError);
  EXPECT_EQ(protocol_offset(v2), v2.find("\"version\""));

  std::string wrong_type = good;
  wrong_type.replace(wrong_type.find("\"update\""), 8, "\"gossip\"");
  EXPECT_THROW(decode_message(wrong_type), ProtocolError);

  EXPECT_THROW(decode_broadcast(good), ProtocolError);  // an update, not a broadcast
  EXPECT_THROW(decode_message("[1,2]"), ProtocolError);
  EXPECT_THROW(decode_message(R"({"msg_type":"update","payload":{},"version":1})"), ProtocolError);
  EXPECT_THROW(decode_message(R"({"msg_type":"update","payload":[],"round_index":0,"version":1})"), ProtocolError);
}

TEST(Wire, PayloadErrorsPointAtThePayload) {
  const std::string good = encode_update(testgen::golden_update(), 1);
  const std::size_t payload_at = good.find("\"payload\":");
  auto with = [&](const std::string& from, const std::string& to) {
    std::string out = good;
    out.replace(out.find(from), from.size(), to);
    return out;
  };
  EXPECT_EQ(protocol_offset(with("0.875", "1.5")), payload_at);  // accuracy outside [0, 1]
  EXPECT_EQ(protocol_offset(with("\"adults-kaggle\"", "\"mars\"")), payload_at);
  EXPECT_EQ(protocol_offset(with("\"n_samples\":123", "\"n_samples\":\"x\"")), payload_at);
  EXPECT_EQ(protocol_offset(with("\"kind\":\"svc\"", "\"kind\":\"knn\"")), payload_at);
}

// ---- framing ---------------------------------------------------------------

TEST(Framing, BigEndianPrefix) {
  const std::string framed = frame_message(std::string(258, 'x'));
  ASSERT_EQ(framed.size(), 262u);
  EXPECT_EQ(framed.substr(0, 4), std::string("\x00\x00\x01\x02", 4));
}

TEST(Framing, DecoderHandlesArbitrarySplits) {
  Rng rng(63);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> messages;
    std::string stream;
    for (std::uint64_t k = 0; k < 1 + rng.uniform_below(5); ++k) {
      messages.push_back(encode_update(testgen::random_update(rng), static_cast<int>(k)));
      if (rng.bernoulli(0.1)) messages.back().clear();
      stream += frame_message(messages.back());
    }
    FrameDecoder decoder;
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < stream.size()) {
      const std::size_t n = std::min<std::size_t>(stream.size() - pos, 1 + rng.uniform_below(300));
      decoder.feed(std::string_view(stream).substr(pos, n));
      pos += n;
      while (auto m = decoder.next()) out.push_back(*m);
    }
    ASSERT_EQ(out, messages);
    ASSERT_EQ(decoder.buffered(), 0u);
  }
}

TEST(Framing, OversizeFrameIsRejected) {
  FrameDecoder decoder;
  decoder.feed(frame_message("ok"));
  ASSERT_EQ(decoder.next(), std::optional<std::string>("ok"));
  decoder.feed(std::string("\x7f\xff\xff\xff", 4));
  try {
    decoder.next();
    FAIL() << "expected ProtocolError";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
}

TEST(Framing, LoopbackReadsInChunks) {
  LoopbackStream s;
  s.write("abcdef");
  EXPECT_EQ(s.read(4), "abcd");
  EXPECT_EQ(s.read(4), "ef");
  EXPECT_TRUE(s.empty());
  EXPECT_EQ(s.read(4), "");
}
