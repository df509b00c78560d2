#pragma once

// Hand assembly of OSPFv2 frames and classic pcap files for the tests.

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "ospf_rqa/lsa.hpp"

namespace pcapgen {

using Bytes = std::vector<std::uint8_t>;

inline void put16(Bytes& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v));
}
inline void put32(Bytes& b, std::uint32_t v) {
  put16(b, static_cast<std::uint16_t>(v >> 16));
  put16(b, static_cast<std::uint16_t>(v));
}
inline void set16(Bytes& b, std::size_t off, std::uint16_t v) {
  b[off] = static_cast<std::uint8_t>(v >> 8);
  b[off + 1] = static_cast<std::uint8_t>(v);
}

struct Header {
  std::uint16_t age = 1;
  int type = 1;
  std::uint32_t ls_id = 0;
  std::uint32_t adv = 0;
  std::uint32_t seq = 0x80000001u;
  std::uint16_t body = 4;  // bytes after the 20-byte header (Update only)
};

inline void put_header(Bytes& b, const Header& h, std::uint16_t length) {
  put16(b, h.age);
  b.push_back(0x02);  // options
  b.push_back(static_cast<std::uint8_t>(h.type));
  put32(b, h.ls_id);
  put32(b, h.adv);
  put32(b, h.seq);
  put16(b, 0);  // checksum
  put16(b, length);
}

/// OSPF packet (Update = 4, Ack = 5) starting at the OSPF header.
inline Bytes ospf_packet(int packet_type, const std::vector<Header>& lsas, std::uint32_t count_override = ~0u) {
  Bytes b;
  b.push_back(2);
  b.push_back(static_cast<std::uint8_t>(packet_type));
  put16(b, 0);  // length, patched below
  put32(b, 0x0a000001);
  put32(b, 0);
  put16(b, 0);
  put16(b, 0);
  for (int i = 0; i < 8; ++i) b.push_back(0);
  if (packet_type == 4) put32(b, count_override != ~0u ? count_override : static_cast<std::uint32_t>(lsas.size()));
  for (const auto& h : lsas) {
    if (packet_type == 4) {
      put_header(b, h, static_cast<std::uint16_t>(20 + h.body));
      for (int i = 0; i < h.body; ++i) b.push_back(0xee);
    } else {
      put_header(b, h, static_cast<std::uint16_t>(20 + h.body));
    }
  }
  set16(b, 2, static_cast<std::uint16_t>(b.size()));
  return b;
}

inline Bytes ipv4(const Bytes& payload, std::uint8_t proto = 89) {
  Bytes b{0x45, 0xc0};
  put16(b, static_cast<std::uint16_t>(20 + payload.size()));
  put32(b, 0);
  b.push_back(1);
  b.push_back(proto);
  put16(b, 0);
  put32(b, 0x0a000001);
  put32(b, 0xe0000005);
  b.insert(b.end(), payload.begin(), payload.end());
  return b;
}

inline Bytes ethernet(const Bytes& ip, int vlans = 0) {
  Bytes b{0x01, 0x00, 0x5e, 0x00, 0x00, 0x05, 0x02, 0, 0, 0, 0, 1};
  for (int i = 0; i < vlans; ++i) {
    put16(b, 0x8100);
    put16(b, static_cast<std::uint16_t>(100 + i));
  }
  put16(b, 0x0800);
  b.insert(b.end(), ip.begin(), ip.end());
  return b;
}

struct Record {
  std::int64_t ts_us;
  Bytes data;
  std::uint32_t orig_len = 0;  // 0: same as data
};

/// Write a classic pcap file. `swapped` writes big-endian headers.
inline void write_pcap(const std::string& path, std::uint32_t link_type, const std::vector<Record>& recs,
                       bool swapped = false) {
  std::ofstream out(path, std::ios::binary);
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      const int shift = swapped ? 24 - 8 * i : 8 * i;
      out.put(static_cast<char>((v >> shift) & 0xff));
    }
  };
  auto u16 = [&](std::uint16_t v) {
    for (int i = 0; i < 2; ++i) {
      const int shift = swapped ? 8 - 8 * i : 8 * i;
      out.put(static_cast<char>((v >> shift) & 0xff));
    }
  };
  u32(0xa1b2c3d4);
  u16(2);
  u16(4);
  u32(0);
  u32(0);
  u32(65535);
  u32(link_type);
  for (const auto& r : recs) {
    u32(static_cast<std::uint32_t>(r.ts_us / 1'000'000));
    u32(static_cast<std::uint32_t>(r.ts_us % 1'000'000));
    u32(static_cast<std::uint32_t>(r.data.size()));
    u32(r.orig_len ? r.orig_len : static_cast<std::uint32_t>(r.data.size()));
    out.write(reinterpret_cast<const char*>(r.data.data()), static_cast<std::streamsize>(r.data.size()));
  }
}

}  // namespace pcapgen
