#pragma once

// Classic libpcap file reader and OSPFv2 LS Update / LS Ack decoding.

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ospf_rqa/errors.hpp"
#include "ospf_rqa/lsa.hpp"

namespace ospf_rqa {

inline constexpr std::uint32_t kPcapMagic = 0xa1b2c3d4;
inline constexpr std::uint32_t kPcapMagicSwapped = 0xd4c3b2a1;
inline constexpr std::uint32_t kLinkTypeEthernet = 1;
inline constexpr std::uint32_t kLinkTypeRawIpv4 = 101;

struct PcapRecord {
  std::int64_t ts_us = 0;
  std::vector<std::uint8_t> data;
  std::uint32_t original_length = 0;
  bool truncated = false;  // captured length < original length
};

/// Streams records in file order. next() throws ParseError when a record
/// header or body is cut short; records before that point are delivered.
class PcapReader {
 public:
  explicit PcapReader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw std::runtime_error("cannot open pcap file: " + path);
    std::array<std::uint8_t, 24> hdr{};
    if (!read_exact(hdr.data(), hdr.size()))
      throw UnsupportedFormat("file too short for a pcap global header: " + path);
    const std::uint32_t magic = le32(hdr.data());
    if (magic == kPcapMagic) {
      swapped_ = false;
    } else if (magic == kPcapMagicSwapped) {
      swapped_ = true;
    } else {
      throw UnsupportedFormat("unsupported capture format (not classic pcap): " + path);
    }
    snaplen_ = u32(hdr.data() + 16);
    link_type_ = u32(hdr.data() + 20);
    offset_ = hdr.size();
  }

  std::uint32_t link_type() const noexcept { return link_type_; }
  std::uint32_t snaplen() const noexcept { return snaplen_; }
  bool byte_swapped() const noexcept { return swapped_; }

  std::optional<PcapRecord> next() {
    std::array<std::uint8_t, 16> rh{};
    in_.read(reinterpret_cast<char*>(rh.data()), static_cast<std::streamsize>(rh.size()));
    const auto got = static_cast<std::size_t>(in_.gcount());
    if (got == 0) return std::nullopt;
    if (got < rh.size())
      throw ParseError("truncated pcap record header at byte " + std::to_string(offset_),
                       offset_);
    const std::uint32_t sec = u32(rh.data());
    const std::uint32_t usec = u32(rh.data() + 4);
    const std::uint32_t incl = u32(rh.data() + 8);
    const std::uint32_t orig = u32(rh.data() + 12);
    PcapRecord rec;
    rec.ts_us = static_cast<std::int64_t>(sec) * 1'000'000 + usec;
    rec.original_length = orig;
    rec.truncated = incl < orig;
    rec.data.resize(incl);
    if (incl > 0 && !read_exact(rec.data.data(), incl))
      throw ParseError("truncated pcap record body at byte " + std::to_string(offset_ + 16),
                       offset_ + 16);
    offset_ += 16 + incl;
    return rec;
  }

 private:
  bool read_exact(std::uint8_t* dst, std::size_t n) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    return static_cast<std::size_t>(in_.gcount()) == n;
  }
  static std::uint32_t le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
  }
  std::uint32_t u32(const std::uint8_t* p) const {
    const std::uint32_t v = le32(p);
    if (!swapped_) return v;
    return ((v & 0xff) << 24) | ((v & 0xff00) << 8) | ((v >> 8) & 0xff00) | (v >> 24);
  }

  std::ifstream in_;
  bool swapped_ = false;
  std::uint32_t snaplen_ = 0;
  std::uint32_t link_type_ = 0;
  std::size_t offset_ = 0;
};

inline std::vector<PcapRecord> read_pcap(const std::string& path, std::uint32_t* link_type = nullptr) {
  PcapReader reader(path);
  if (link_type) *link_type = reader.link_type();
  std::vector<PcapRecord> out;
  while (auto rec = reader.next()) out.push_back(std::move(*rec));
  return out;
}

namespace detail {

inline std::uint16_t be16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
}
inline std::uint32_t be32(std::span<const std::uint8_t> b, std::size_t off) {
  return (static_cast<std::uint32_t>(b[off]) << 24) | (static_cast<std::uint32_t>(b[off + 1]) << 16) |
         (static_cast<std::uint32_t>(b[off + 2]) << 8) | b[off + 3];
}

[[noreturn]] inline void malformed(const std::string& what, std::size_t offset) {
  throw ParseError("malformed OSPF packet at offset " + std::to_string(offset) + ": " + what,
                   offset);
}

}  // namespace detail

inline constexpr std::uint8_t kIpProtoOspf = 89;
inline constexpr std::uint8_t kOspfLsUpdate = 4;
inline constexpr std::uint8_t kOspfLsAck = 5;
inline constexpr std::size_t kLsaHeaderSize = 20;
inline constexpr std::size_t kOspfHeaderSize = 24;

/// Decode LSA headers from one captured frame. Frames that are not IPv4/OSPF
/// LS Update or LS Ack yield nothing. LSA types outside 1..5 are skipped.
inline std::vector<LsaEvent> parse_ospf_packet(std::span<const std::uint8_t> frame,
                                               std::uint32_t link_type, std::int64_t ts_us = 0,
                                               const std::string& monitor = {}) {
  using detail::be16;
  using detail::be32;
  std::vector<LsaEvent> out;

  std::size_t ip = 0;
  if (link_type == kLinkTypeEthernet) {
    if (frame.size() < 14) return out;
    std::uint16_t ethertype = be16(frame, 12);
    ip = 14;
    while (ethertype == 0x8100 || ethertype == 0x88a8) {  // VLAN tags
      if (frame.size() < ip + 4) return out;
      ethertype = be16(frame, ip + 2);
      ip += 4;
    }
    if (ethertype != 0x0800) return out;
  } else if (link_type != kLinkTypeRawIpv4) {
    throw UnsupportedFormat("unsupported pcap link type " + std::to_string(link_type));
  }

  if (frame.size() < ip + 20) return out;
  if ((frame[ip] >> 4) != 4) return out;
  const std::size_t ihl = static_cast<std::size_t>(frame[ip] & 0x0f) * 4;
  if (frame[ip + 9] != kIpProtoOspf) return out;
  if (ihl < 20 || frame.size() < ip + ihl) detail::malformed("bad IPv4 header length", ip);
  const std::size_t ip_total = be16(frame, ip + 2);
  if (ip_total < ihl || ip + ip_total > frame.size())
    detail::malformed("IPv4 total length exceeds captured frame", ip + 2);

  const std::size_t ospf = ip + ihl;
  const std::size_t end = ip + ip_total;
  if (end < ospf + kOspfHeaderSize) detail::malformed("OSPF header truncated", ospf);
  if (frame[ospf] != 2) return out;  // OSPFv2 only
  const std::uint8_t type = frame[ospf + 1];
  if (type != kOspfLsUpdate && type != kOspfLsAck) return out;
  const std::size_t ospf_len = be16(frame, ospf + 2);
  if (ospf_len < kOspfHeaderSize || ospf + ospf_len > end)
    detail::malformed("OSPF packet length inconsistent with IPv4 length", ospf + 2);
  const std::size_t body_end = ospf + ospf_len;

  auto decode_header = [&](std::size_t off, bool is_ack) -> std::optional<LsaEvent> {
    const int ls_type = frame[off + 3];
    if (!valid_ls_type(ls_type)) return std::nullopt;
    LsaEvent e;
    e.ts_us = ts_us;
    e.monitor = monitor;
    e.ls_age = std::min<int>(be16(frame, off) & 0x7fff, kMaxAge);  // strip DoNotAge
    e.ls_type = ls_type;
    e.ls_id = Ipv4{be32(frame, off + 4)};
    e.adv_router = Ipv4{be32(frame, off + 8)};
    e.ls_seq = static_cast<std::int32_t>(be32(frame, off + 12));
    e.is_ack = is_ack;
    return e;
  };

  std::size_t off = ospf + kOspfHeaderSize;
  if (type == kOspfLsUpdate) {
    if (off + 4 > body_end) detail::malformed("LS Update missing LSA count", off);
    const std::uint32_t count = be32(frame, off);
    off += 4;
    for (std::uint32_t k = 0; k < count; ++k) {
      if (off + kLsaHeaderSize > body_end)
        detail::malformed("LS Update declares " + std::to_string(count) + " LSAs but LSA " +
                              std::to_string(k + 1) + " is missing",
                          off);
      const std::size_t lsa_len = be16(frame, off + 18);
      if (lsa_len < kLsaHeaderSize || off + lsa_len > body_end)
        detail::malformed("LSA length field " + std::to_string(lsa_len) + " out of bounds", off + 18);
      if (auto e = decode_header(off, false)) out.push_back(std::move(*e));
      off += lsa_len;
    }
  } else {
    if ((body_end - off) % kLsaHeaderSize != 0)
      detail::malformed("LS Ack body is not a whole number of LSA headers", off);
    for (; off < body_end; off += kLsaHeaderSize)
      if (auto e = decode_header(off, true)) out.push_back(std::move(*e));
  }
  return out;
}

/// All LSA events in a capture, stamped with `monitor`.
inline std::vector<LsaEvent> read_pcap_events(const std::string& path, const std::string& monitor) {
  PcapReader reader(path);
  std::vector<LsaEvent> out;
  while (auto rec = reader.next()) {
    std::vector<LsaEvent> events;
    try {
      events = parse_ospf_packet(rec->data, reader.link_type(), rec->ts_us, monitor);
    } catch (const ParseError&) {
      // A snaplen cut makes the length fields look inconsistent.
      if (rec->truncated) continue;
      throw;
    }
    out.insert(out.end(), std::make_move_iterator(events.begin()),
               std::make_move_iterator(events.end()));
  }
  return out;
}

}  // namespace ospf_rqa
