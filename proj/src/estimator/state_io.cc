#include "binpose/estimator/state_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "binpose/errors.h"

namespace binpose::estimator {

namespace {

static_assert(std::endian::native == std::endian::little,
              "state serialization assumes a little-endian host");

class Writer {
 public:
  template <typename T>
  void Put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void PutString(const std::string& s) {
    Put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void PutBytes(const char* p, std::size_t n) { out_.append(p, n); }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(const std::string& bytes, std::string source)
      : bytes_(bytes), source_(std::move(source)) {}

  template <typename T>
  T Get() {
    Need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string GetString() {
    const auto n = Get<std::uint32_t>();
    Need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  void Expect(const char* p, std::size_t n, const char* what) {
    Need(n);
    if (std::memcmp(bytes_.data() + pos_, p, n) != 0) Fail(what);
    pos_ += n;
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }
  [[noreturn]] void Fail(const std::string& what) const { throw DataError(source_, what); }

 private:
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) Fail("truncated estimator state");
  }
  const std::string& bytes_;
  std::string source_;
  std::size_t pos_ = 0;
};

void PutPose(Writer& w, const Pose& p) {
  w.Put(p.rotation().w());
  w.Put(p.rotation().x());
  w.Put(p.rotation().y());
  w.Put(p.rotation().z());
  for (int i = 0; i < 3; ++i) w.Put(p.translation()[i]);
}

Pose GetPose(Reader& r) {
  const double qw = r.Get<double>(), qx = r.Get<double>(), qy = r.Get<double>(),
               qz = r.Get<double>();
  geometry::Vec3 t;
  for (int i = 0; i < 3; ++i) t[i] = r.Get<double>();
  try {
    return Pose(geometry::Quat(qw, qx, qy, qz), t);
  } catch (const PreconditionError& e) {
    r.Fail(e.what());
  }
}

EstimatorState Decode(const std::string& bytes, const std::string& source) {
  Reader r(bytes, source);
  r.Expect(kStateMagic, sizeof(kStateMagic), "bad estimator state magic");
  const auto version = r.Get<std::uint32_t>();
  if (version != kStateVersion) {
    r.Fail("estimator state version " + std::to_string(version) + " is not supported (expected " +
           std::to_string(kStateVersion) + ")");
  }
  const auto desc_len = r.Get<std::uint32_t>();
  if (desc_len != static_cast<std::uint32_t>(kDescriptorLength)) r.Fail("descriptor length mismatch");

  EstimatorState s;
  try {
    s.config = EstimatorConfig::FromJson(nlohmann::json::parse(r.GetString()));
  } catch (const nlohmann::json::exception& e) {
    r.Fail(std::string("bad config block: ") + e.what());
  } catch (const ConfigError& e) {
    r.Fail(e.what());
  }
  s.seen = r.Get<std::uint64_t>();
  s.training_loss = r.Get<double>();
  const auto count = r.Get<std::uint64_t>();
  s.exemplars.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Exemplar e;
    e.object_id = r.GetString();
    e.source = r.GetString();
    e.pose = GetPose(r);
    e.descriptor.resize(desc_len);
    for (double& d : e.descriptor) d = r.Get<double>();
    s.exemplars.push_back(std::move(e));
  }
  const auto anchors = r.Get<std::uint32_t>();
  if (anchors != static_cast<std::uint32_t>(geometry::kAnchorCount)) r.Fail("anchor count mismatch");
  for (double& b : s.anchor_bias) b = r.Get<double>();
  if (!r.AtEnd()) r.Fail("trailing bytes after estimator state");
  return s;
}

}  // namespace

std::string SerializeState(const EstimatorState& state) {
  Writer w;
  w.PutBytes(kStateMagic, sizeof(kStateMagic));
  w.Put<std::uint32_t>(kStateVersion);
  w.Put<std::uint32_t>(kDescriptorLength);
  w.PutString(state.config.ToJson().dump());
  w.Put<std::uint64_t>(state.seen);
  w.Put<double>(state.training_loss);
  w.Put<std::uint64_t>(state.exemplars.size());
  for (const Exemplar& e : state.exemplars) {
    if (e.descriptor.size() != static_cast<std::size_t>(kDescriptorLength)) {
      throw PreconditionError("SerializeState: descriptor length mismatch");
    }
    w.PutString(e.object_id);
    w.PutString(e.source);
    PutPose(w, e.pose);
    for (double d : e.descriptor) w.Put(d);
  }
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(state.anchor_bias.size()));
  for (double b : state.anchor_bias) w.Put(b);
  return w.Take();
}

EstimatorState DeserializeState(const std::string& bytes) { return Decode(bytes, "<memory>"); }

void SaveState(const EstimatorState& state, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string(), "cannot open for writing");
  const std::string bytes = SerializeState(state);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError(path.string(), "write failed");
}

EstimatorState LoadState(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string(), "cannot open");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return Decode(bytes, path.string());
}

}  // namespace binpose::estimator
