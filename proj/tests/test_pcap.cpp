#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "ospf_rqa/pcap.hpp"
#include "pcap_builder.hpp"

using namespace ospf_rqa;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ospf_rqa_pcap_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return (dir / name).string();
}

pcapgen::Header hdr(std::uint16_t age, int type, std::uint32_t id, std::uint32_t adv, std::uint32_t seq) {
  pcapgen::Header h;
  h.age = age;
  h.type = type;
  h.ls_id = id;
  h.adv = adv;
  h.seq = seq;
  return h;
}

}  // namespace

TEST(OspfPacket, UpdateHeadersRecovered) {
  const auto pkt = pcapgen::ospf_packet(
      4, {hdr(7, 1, 0x0a000003, 0x0a000003, 0x80000005), hdr(0x8000 | 12, 2, 0xc0a80001, 0x0a000004, 0x7fffffff)});
  const auto frame = pcapgen::ethernet(pcapgen::ipv4(pkt));
  const auto ev = parse_ospf_packet(frame, kLinkTypeEthernet, 42, "mon");
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0].ts_us, 42);
  EXPECT_EQ(ev[0].monitor, "mon");
  EXPECT_EQ(ev[0].ls_type, 1);
  EXPECT_EQ(ev[0].ls_age, 7);
  EXPECT_EQ(ev[0].ls_id.str(), "10.0.0.3");
  EXPECT_EQ(ev[0].adv_router.str(), "10.0.0.3");
  EXPECT_EQ(ev[0].ls_seq, static_cast<std::int32_t>(0x80000005u));
  EXPECT_FALSE(ev[0].is_ack);
  EXPECT_EQ(ev[1].ls_age, 12);  // DoNotAge bit masked
  EXPECT_EQ(ev[1].ls_type, 2);
  EXPECT_EQ(ev[1].ls_id.str(), "192.168.0.1");
  EXPECT_EQ(ev[1].ls_seq, 0x7fffffff);
}

TEST(OspfPacket, AckHeadersRecovered) {
  const auto pkt = pcapgen::ospf_packet(5, {hdr(3, 3, 1, 2, 0x80000001), hdr(4, 5, 3, 4, 0x80000002)});
  const auto ev = parse_ospf_packet(pcapgen::ipv4(pkt), kLinkTypeRawIpv4);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_TRUE(ev[0].is_ack);
  EXPECT_TRUE(ev[1].is_ack);
  EXPECT_EQ(ev[1].ls_type, 5);
  EXPECT_EQ(ev[1].adv_router.value, 4u);
}

TEST(OspfPacket, VlanTagsAreSkipped) {
  const auto pkt = pcapgen::ospf_packet(4, {hdr(1, 1, 9, 9, 0x80000001)});
  EXPECT_EQ(parse_ospf_packet(pcapgen::ethernet(pcapgen::ipv4(pkt), 2), kLinkTypeEthernet).size(), 1u);
}

TEST(OspfPacket, NonOspfAndOtherPacketTypesIgnored) {
  const auto pkt = pcapgen::ospf_packet(4, {hdr(1, 1, 9, 9, 0x80000001)});
  EXPECT_TRUE(parse_ospf_packet(pcapgen::ethernet(pcapgen::ipv4(pkt, 17)), kLinkTypeEthernet).empty());
  EXPECT_TRUE(parse_ospf_packet(pcapgen::ethernet(pcapgen::ipv4(pcapgen::ospf_packet(1, {}))), kLinkTypeEthernet).empty());
  auto arp = pcapgen::ethernet(pcapgen::ipv4(pkt));
  arp[12] = 0x08;
  arp[13] = 0x06;
  EXPECT_TRUE(parse_ospf_packet(arp, kLinkTypeEthernet).empty());
}

TEST(OspfPacket, UnknownLsaTypesSkipped) {
  const auto pkt = pcapgen::ospf_packet(4, {hdr(1, 7, 9, 9, 0x80000001), hdr(1, 1, 9, 9, 0x80000001)});
  const auto ev = parse_ospf_packet(pcapgen::ipv4(pkt), kLinkTypeRawIpv4);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].ls_type, 1);
}

TEST(OspfPacket, MalformedCountReportsOffset) {
  const auto pkt = pcapgen::ospf_packet(4, {hdr(1, 1, 9, 9, 0x80000001)}, 3);
  const auto frame = pcapgen::ethernet(pcapgen::ipv4(pkt));
  try {
    parse_ospf_packet(frame, kLinkTypeEthernet);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    // Second LSA would start after eth(14) + ip(20) + ospf(24) + count(4) + first LSA(24).
    EXPECT_EQ(e.location(), 14u + 20u + 24u + 4u + 24u);
    EXPECT_NE(std::string(e.what()).find("declares 3"), std::string::npos);
  }
}

TEST(OspfPacket, BadLsaLengthRejected) {
  auto pkt = pcapgen::ospf_packet(4, {hdr(1, 1, 9, 9, 0x80000001)});
  pcapgen::set16(pkt, 24 + 4 + 18, 200);
  EXPECT_THROW(parse_ospf_packet(pcapgen::ipv4(pkt), kLinkTypeRawIpv4), ParseError);
}

TEST(OspfPacket, UnsupportedLinkType) {
  EXPECT_THROW(parse_ospf_packet(pcapgen::Bytes(40, 0), 113), UnsupportedFormat);
}

TEST(PcapFile, ReadsBothByteOrders) {
  const auto pkt = pcapgen::ospf_packet(4, {hdr(5, 1, 0x0a000002, 0x0a000002, 0x80000003)});
  const auto ack = pcapgen::ospf_packet(5, {hdr(6, 1, 0x0a000002, 0x0a000002, 0x80000003)});
  for (bool swapped : {false, true}) {
    const auto path = temp_path(swapped ? "be.pcap" : "le.pcap");
    pcapgen::write_pcap(path, kLinkTypeEthernet,
                        {{1'500'000'123, pcapgen::ethernet(pcapgen::ipv4(pkt))},
                         {1'500'000'456, pcapgen::ethernet(pcapgen::ipv4(ack))}},
                        swapped);
    PcapReader reader(path);
    EXPECT_EQ(reader.byte_swapped(), swapped);
    const auto ev = read_pcap_events(path, "rcs1");
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_EQ(ev[0].ts_us, 1'500'000'123);
    EXPECT_EQ(ev[1].ts_us, 1'500'000'456);
    EXPECT_EQ(ev[0].monitor, "rcs1");
    EXPECT_FALSE(ev[0].is_ack);
    EXPECT_TRUE(ev[1].is_ack);
    EXPECT_EQ(ev[0].ls_age, 5);
  }
}

TEST(PcapFile, BadMagicIsUnsupported) {
  const auto path = temp_path("bad.pcap");
  std::ofstream(path, std::ios::binary) << std::string(24, '\x0a');
  EXPECT_THROW(PcapReader{path}, UnsupportedFormat);
}

TEST(PcapFile, TruncatedRecordIsParseError) {
  const auto path = temp_path("trunc.pcap");
  const auto pkt = pcapgen::ospf_packet(4, {hdr(5, 1, 2, 2, 0x80000003)});
  pcapgen::write_pcap(path, kLinkTypeRawIpv4, {{0, pcapgen::ipv4(pkt)}});
  fs::resize_file(path, fs::file_size(path) - 5);
  EXPECT_THROW(read_pcap_events(path, "m"), ParseError);
}

TEST(PcapFile, SnaplenCutFramesAreSkipped) {
  const auto path = temp_path("snap.pcap");
  const auto full = pcapgen::ipv4(pcapgen::ospf_packet(4, {hdr(5, 1, 2, 2, 0x80000003)}));
  pcapgen::Bytes cut(full.begin(), full.begin() + 40);
  pcapgen::write_pcap(path, kLinkTypeRawIpv4,
                      {{0, cut, static_cast<std::uint32_t>(full.size())}, {10, full}});
  const auto ev = read_pcap_events(path, "m");
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].ts_us, 10);
}
