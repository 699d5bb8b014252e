#include "lrp/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "lrp/errors.hpp"
#include "lrp/rng.hpp"

namespace lrp {

namespace {

using json = nlohmann::json;

class Writer {
 public:
  void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  std::size_t size() const { return out_.size(); }
  const std::string& data() const { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw FormatError("truncated file");
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }
  std::string_view slice(std::size_t from, std::size_t to) const {
    return in_.substr(from, to - from);
  }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

void write_params(Writer& w, const ModelParams& p) {
  w.u32(static_cast<std::uint32_t>(p.d));
  w.f64(p.beta);
  w.f64(p.delta_min);
  w.f64(p.delta_max);
  w.u64(p.seed);
}

ModelParams read_params(Reader& r) {
  ModelParams p;
  p.d = static_cast<int>(r.u32());
  if (p.d < 1 || p.d > kMaxDim) throw FormatError("unsupported dimension in file");
  p.beta = r.f64();
  p.delta_min = r.f64();
  p.delta_max = r.f64();
  p.seed = r.u64();
  return p;
}

void check_magic(Reader& r, const char* magic) {
  r.need(4);
  char m[4];
  for (char& c : m) c = static_cast<char>(r.u8());
  if (std::memcmp(m, magic, 4) != 0) throw FormatError(std::string("bad magic, expected ") + magic);
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) throw FormatError("unsupported format version " + std::to_string(version));
}

void verify_checksum(Reader& r, std::size_t records_begin) {
  const std::size_t records_end = r.pos();
  const std::uint64_t stored = r.u64();
  const std::string_view rec = r.slice(records_begin, records_end);
  if (fnv1a64(rec.data(), rec.size()) != stored) throw FormatError("checksum mismatch");
  if (r.remaining() != 0) throw FormatError("trailing bytes after checksum");
}

void finish_checksum(Writer& w, std::size_t records_begin) {
  const std::string& all = w.data();
  w.u64(fnv1a64(all.data() + records_begin, all.size() - records_begin));
}

}  // namespace

std::string encode_edge_file(const EdgeConfiguration& config) {
  Writer w;
  w.bytes("LRPE", 4);
  w.u32(kFormatVersion);
  write_params(w, config.params);
  const int d = config.params.d;
  for (int m = 0; m < d; ++m) w.f64(config.window.lo[m]);
  for (int m = 0; m < d; ++m) w.f64(config.window.hi[m]);
  w.u32(static_cast<std::uint32_t>(config.seed_trace.size()));
  for (const auto& s : config.seed_trace) w.str(s);
  w.u64(config.edges.size());
  const std::size_t begin = w.size();
  for (const LongEdge& e : config.edges) {
    for (int m = 0; m < d; ++m) w.f64(e.a[m]);
    for (int m = 0; m < d; ++m) w.f64(e.b[m]);
  }
  finish_checksum(w, begin);
  return w.data();
}

EdgeConfiguration decode_edge_file(std::string_view bytes) {
  Reader r(bytes);
  check_magic(r, "LRPE");
  EdgeConfiguration cfg;
  cfg.params = read_params(r);
  const int d = cfg.params.d;
  Point lo(d), hi(d);
  for (int m = 0; m < d; ++m) lo[m] = r.f64();
  for (int m = 0; m < d; ++m) hi[m] = r.f64();
  try {
    cfg.window = Window(lo, hi);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("bad window: ") + e.what());
  }
  const std::uint32_t traces = r.u32();
  for (std::uint32_t i = 0; i < traces; ++i) cfg.seed_trace.push_back(r.str());
  const std::uint64_t count = r.u64();
  if (count > r.remaining() / (16 * static_cast<std::uint64_t>(d)))
    throw FormatError("edge count exceeds file size");
  const std::size_t begin = r.pos();
  cfg.edges.resize(static_cast<std::size_t>(count));
  for (auto& e : cfg.edges) {
    e.a = Point(d);
    e.b = Point(d);
    for (int m = 0; m < d; ++m) e.a[m] = r.f64();
    for (int m = 0; m < d; ++m) e.b[m] = r.f64();
  }
  verify_checksum(r, begin);
  return cfg;
}

void write_edge_file(const std::string& path, const EdgeConfiguration& config) {
  atomic_write(path, encode_edge_file(config));
}

EdgeConfiguration read_edge_file(const std::string& path) {
  return decode_edge_file(read_file(path));
}

std::string encode_lattice_file(const LatticeGraph& graph) {
  Writer w;
  w.bytes("LRPL", 4);
  w.u32(kFormatVersion);
  write_params(w, graph.params);
  w.u8(graph.touching_implicit ? 1 : 0);
  const int d = graph.params.d;
  for (int m = 0; m < d; ++m) w.i64(graph.box.lo[m]);
  for (int m = 0; m < d; ++m) w.i64(graph.box.hi[m]);
  w.u64(graph.long_edges.size());
  const std::size_t begin = w.size();
  for (const LatticeEdge& e : graph.long_edges) {
    const Site a = graph.site_a(e), b = graph.site_b(e);
    for (int m = 0; m < d; ++m) w.i64(a[m]);
    for (int m = 0; m < d; ++m) w.i64(b[m]);
  }
  finish_checksum(w, begin);
  return w.data();
}

LatticeGraph decode_lattice_file(std::string_view bytes) {
  Reader r(bytes);
  check_magic(r, "LRPL");
  LatticeGraph g;
  g.params = read_params(r);
  g.touching_implicit = r.u8() != 0;
  const int d = g.params.d;
  Site lo(d), hi(d);
  for (int m = 0; m < d; ++m) lo[m] = r.i64();
  for (int m = 0; m < d; ++m) hi[m] = r.i64();
  try {
    g.box = IntBox(lo, hi);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("bad box: ") + e.what());
  }
  const std::uint64_t count = r.u64();
  if (count > r.remaining() / (16 * static_cast<std::uint64_t>(d)))
    throw FormatError("edge count exceeds file size");
  const std::size_t begin = r.pos();
  g.long_edges.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t i = 0; i < count; ++i) {
    Site a(d), b(d);
    for (int m = 0; m < d; ++m) a[m] = r.i64();
    for (int m = 0; m < d; ++m) b[m] = r.i64();
    if (!g.box.contains(a) || !g.box.contains(b)) throw FormatError("edge outside box");
    g.long_edges.push_back({g.box.index(a), g.box.index(b)});
  }
  verify_checksum(r, begin);
  try {
    g.validate();
  } catch (const InvariantViolation& e) {
    throw FormatError(std::string("invalid lattice file: ") + e.what());
  }
  return g;
}

void write_lattice_file(const std::string& path, const LatticeGraph& graph) {
  atomic_write(path, encode_lattice_file(graph));
}

LatticeGraph read_lattice_file(const std::string& path) {
  return decode_lattice_file(read_file(path));
}

std::string sniff_sample_file(const std::string& path) {
  const std::string head = read_file(path).substr(0, 4);
  if (head == "LRPE") return "edge";
  if (head == "LRPL") return "lattice";
  throw FormatError("not a sample file: " + path);
}

void write_raster(const std::string& path, const DistanceField& field,
                  const std::string& extra_json) {
  Writer w;
  for (double v : field.values) {
    const auto f = static_cast<float>(v);
    w.u32(std::bit_cast<std::uint32_t>(f));
  }
  json side;
  side["format"] = "f32le";
  side["order"] = "row-major, last axis fastest";
  std::vector<std::int64_t> shape;
  std::vector<double> lo, hi, src;
  for (int m = 0; m < field.dim(); ++m) {
    shape.push_back(field.shape[m]);
    lo.push_back(field.window.lo[m]);
    hi.push_back(field.window.hi[m]);
    src.push_back(field.source[m]);
  }
  side["shape"] = shape;
  side["window"] = {{"lo", lo}, {"hi", hi}};
  side["resolution"] = field.resolution;
  side["source"] = src;
  side["meta"] = json::parse(extra_json);
  atomic_write(path, w.data());
  atomic_write(path + ".json", side.dump(2) + "\n");
}

DistanceField read_raster(const std::string& path) {
  const json side = json::parse(read_file(path + ".json"));
  DistanceField f;
  const auto shape = side.at("shape").get<std::vector<std::int64_t>>();
  const auto lo = side.at("window").at("lo").get<std::vector<double>>();
  const auto hi = side.at("window").at("hi").get<std::vector<double>>();
  const auto src = side.at("source").get<std::vector<double>>();
  const int d = static_cast<int>(shape.size());
  Point plo(d), phi(d), ps(d);
  for (int m = 0; m < d; ++m) {
    f.shape[m] = shape[static_cast<std::size_t>(m)];
    plo[m] = lo[static_cast<std::size_t>(m)];
    phi[m] = hi[static_cast<std::size_t>(m)];
    ps[m] = src[static_cast<std::size_t>(m)];
  }
  f.window = Window(plo, phi);
  f.source = ps;
  f.resolution = side.at("resolution").get<double>();
  const std::string raw = read_file(path);
  if (raw.size() != static_cast<std::size_t>(f.cell_count()) * 4)
    throw FormatError("raster size does not match its sidecar");
  Reader r(raw);
  f.values.resize(static_cast<std::size_t>(f.cell_count()));
  for (auto& v : f.values) v = std::bit_cast<float>(r.u32());
  return f;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, std::string_view bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string file_digest(const std::string& path) {
  const std::string s = read_file(path);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(s.data(), s.size())));
  return buf;
}

}  // namespace lrp
