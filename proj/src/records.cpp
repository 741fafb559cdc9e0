#include "phystrack/records.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "phystrack/error.hpp"

namespace phystrack {
namespace {

constexpr int kVersion = 1;

void put(std::string& line, double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw IoError("cannot format number");
  if (!line.empty()) line.push_back(' ');
  line.append(buf, ptr);
}

std::string text(double x) {
  std::string s;
  put(s, x);
  return s;
}

void put(std::string& line, std::string_view token) {
  if (!line.empty()) line.push_back(' ');
  line.append(token);
}

void put_matrix(std::string& line, const Mat3& m) {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) put(line, m(r, c));
  }
}

void write_header(std::ostream& out, std::string_view kind) {
  out << "# phystrack " << kind << " v" << kVersion << '\n';
}

// Tokenized view of one record file.
class Reader {
 public:
  Reader(std::istream& in, std::string_view kind) : in_(in), kind_(kind) {
    std::string line;
    if (!std::getline(in_, line)) fail("empty file");
    ++line_no_;
    const std::string expected = "# phystrack " + kind_ + " v" + std::to_string(kVersion);
    if (line != expected) fail("expected header '" + expected + "', got '" + line + "'");
  }

  /// Next data line split into tokens, collecting "# key value" metadata on
  /// the way. False at end of file.
  bool next(std::vector<std::string_view>& tokens) {
    while (std::getline(in_, line_)) {
      ++line_no_;
      if (line_.empty()) continue;
      if (line_[0] == '#') {
        record_metadata();
        continue;
      }
      tokens = split(line_);
      return true;
    }
    if (in_.bad()) fail("read error");
    return false;
  }

  const std::vector<std::string>* meta(std::string_view key) {
    for (const auto& m : metadata_) {
      if (!m.empty() && m[0] == key) return &m;
    }
    return nullptr;
  }

  /// Consumes the metadata lines before the first record.
  void read_preamble() {
    while (in_.peek() == '#') {
      std::getline(in_, line_);
      ++line_no_;
      record_metadata();
    }
  }

  double number(std::string_view tok) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      fail("bad number '" + std::string(tok) + "'");
    }
    return v;
  }

  int integer(std::string_view tok) const {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("bad integer '" + std::string(tok) + "'");
    return v;
  }

  double meta_number(std::string_view key) {
    const auto* m = meta(key);
    if (!m || m->size() != 2) fail("missing metadata '" + std::string(key) + "'");
    return number((*m)[1]);
  }

  void expect_columns(const std::vector<std::string_view>& tokens, std::size_t n) const {
    if (tokens.size() != n) {
      fail("expected " + std::to_string(n) + " columns, got " + std::to_string(tokens.size()));
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw IoError(kind_ + " record line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  static std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
      if (j > i) out.push_back(s.substr(i, j - i));
      i = j;
    }
    return out;
  }

  void record_metadata() {
    std::vector<std::string> m;
    for (auto t : split(std::string_view(line_).substr(1))) m.emplace_back(t);
    if (!m.empty()) metadata_.push_back(std::move(m));
  }

  std::istream& in_;
  std::string kind_;
  std::string line_;
  int line_no_ = 0;
  std::vector<std::vector<std::string>> metadata_;
};

Mat3 read_matrix(const Reader& r, const std::vector<std::string_view>& t, std::size_t first) {
  Mat3 m;
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = r.number(t[first + i]);
  return m;
}

char status_code(ContactStatus s) {
  switch (s) {
    case ContactStatus::kFree: return 'F';
    case ContactStatus::kPotential: return 'P';
    case ContactStatus::kContact: return 'C';
  }
  return '?';
}

}  // namespace

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::string record_kind(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::getline(in, line);
  constexpr std::string_view prefix = "# phystrack ";
  if (line.rfind(prefix, 0) != 0) throw IoError("'" + path + "' is not a phystrack record file");
  const std::string rest = line.substr(prefix.size());
  return rest.substr(0, rest.find(' '));
}

void write_motion(std::ostream& out, const MotionSequence& motion) {
  write_header(out, "motion");
  const bool contacts = !motion.contacts.empty();
  const int k3 = motion.theta.empty() ? 0 : static_cast<int>(motion.theta.front().size());
  out << "# rate " << text(motion.rate) << '\n' << "# angles " << k3 << '\n' << "# contacts " << (contacts ? 1 : 0) << '\n';
  std::string line;
  for (int f = 0; f < motion.length(); ++f) {
    line.clear();
    put(line, f / motion.rate);
    for (int i = 0; i < 3; ++i) put(line, motion.root[f](i));
    for (Eigen::Index i = 0; i < motion.theta[f].size(); ++i) put(line, motion.theta[f](i));
    if (contacts) {
      for (bool c : motion.contacts[f]) put(line, c ? "1" : "0");
    }
    out << line << '\n';
  }
  if (!out) throw IoError("write failed");
}

MotionSequence read_motion(std::istream& in) {
  Reader r(in, "motion");
  r.read_preamble();
  MotionSequence m;
  m.rate = r.meta_number("rate");
  const int k3 = static_cast<int>(r.meta_number("angles"));
  const bool contacts = r.meta_number("contacts") != 0.0;
  const std::size_t columns = 4 + k3 + (contacts ? kEndpointCount : 0);
  std::vector<std::string_view> t;
  while (r.next(t)) {
    r.expect_columns(t, columns);
    m.root.emplace_back(r.number(t[1]), r.number(t[2]), r.number(t[3]));
    VecX theta(k3);
    for (int i = 0; i < k3; ++i) theta(i) = r.number(t[4 + i]);
    m.theta.push_back(std::move(theta));
    if (contacts) {
      std::array<bool, kEndpointCount> c{};
      for (int i = 0; i < kEndpointCount; ++i) c[i] = r.integer(t[4 + k3 + i]) != 0;
      m.contacts.push_back(c);
    }
  }
  return m;
}

void write_frames(std::ostream& out, const std::vector<EstimatorFrame>& frames) {
  write_header(out, "frames");
  const int k3 = frames.empty() ? 0 : static_cast<int>(frames.front().theta_ref.size());
  out << "# angles " << k3 << '\n';
  std::string line;
  for (const EstimatorFrame& f : frames) {
    line.clear();
    put(line, f.timestamp);
    put(line, f.v_par_mag);
    for (int i = 0; i < 3; ++i) put(line, f.v_perp(i));
    for (double s : f.s) put(line, s);
    const Vec3 g = f.g_root.value_or(Vec3::Zero());
    put(line, f.g_root ? "1" : "0");
    for (int i = 0; i < 3; ++i) put(line, g(i));
    for (Eigen::Index i = 0; i < f.theta_ref.size(); ++i) put(line, f.theta_ref(i));
    out << line << '\n';
  }
  if (!out) throw IoError("write failed");
}

std::vector<EstimatorFrame> read_frames(std::istream& in) {
  Reader r(in, "frames");
  r.read_preamble();
  const int k3 = static_cast<int>(r.meta_number("angles"));
  const std::size_t columns = 14 + k3;
  std::vector<EstimatorFrame> frames;
  std::vector<std::string_view> t;
  while (r.next(t)) {
    r.expect_columns(t, columns);
    EstimatorFrame f;
    f.timestamp = r.number(t[0]);
    f.v_par_mag = r.number(t[1]);
    f.v_perp = Vec3(r.number(t[2]), r.number(t[3]), r.number(t[4]));
    for (int i = 0; i < kEndpointCount; ++i) f.s[i] = r.number(t[5 + i]);
    const Vec3 g(r.number(t[11]), r.number(t[12]), r.number(t[13]));
    if (r.integer(t[10]) != 0) f.g_root = g;
    f.theta_ref.resize(k3);
    for (int i = 0; i < k3; ++i) f.theta_ref(i) = r.number(t[14 + i]);
    frames.push_back(std::move(f));
  }
  return frames;
}

void write_imu(std::ostream& out, const ImuRecording& rec) {
  write_header(out, "imu");
  out << "# rate " << text(rec.log.rate) << '\n' << "# sensors " << kSensorCount << '\n';
  if (rec.gravity_inertial) {
    std::string g;
    put(g, "# gravity");
    for (int i = 0; i < 3; ++i) put(g, (*rec.gravity_inertial)(i));
    out << g << '\n';
  }
  std::string line;
  for (int f = 0; f < rec.log.length(); ++f) {
    for (int s = 0; s < kSensorCount; ++s) {
      const ImuSample& x = rec.log.sensors[s][f];
      line.clear();
      put(line, f / rec.log.rate);
      put(line, std::to_string(s));
      for (int i = 0; i < 3; ++i) put(line, x.acc(i));
      for (int i = 0; i < 3; ++i) put(line, x.gyro(i));
      put_matrix(line, x.orientation);
      out << line << '\n';
    }
  }
  if (!out) throw IoError("write failed");
}

ImuRecording read_imu(std::istream& in) {
  Reader r(in, "imu");
  r.read_preamble();
  ImuRecording rec;
  rec.log.rate = r.meta_number("rate");
  if (static_cast<int>(r.meta_number("sensors")) != kSensorCount) r.fail("unsupported sensor count");
  if (const auto* g = r.meta("gravity")) {
    if (g->size() != 4) r.fail("bad gravity metadata");
    rec.gravity_inertial = Vec3(r.number((*g)[1]), r.number((*g)[2]), r.number((*g)[3]));
  }
  std::vector<std::string_view> t;
  int expected = 0;
  while (r.next(t)) {
    r.expect_columns(t, 17);
    const int s = r.integer(t[1]);
    if (s != expected) r.fail("expected sensor " + std::to_string(expected) + ", got " + std::string(t[1]));
    expected = (expected + 1) % kSensorCount;
    ImuSample x;
    x.acc = Vec3(r.number(t[2]), r.number(t[3]), r.number(t[4]));
    x.gyro = Vec3(r.number(t[5]), r.number(t[6]), r.number(t[7]));
    x.orientation = read_matrix(r, t, 8);
    rec.log.sensors[s].push_back(x);
  }
  if (expected != 0) r.fail("incomplete final frame");
  try {
    rec.log.validate();
  } catch (const ConfigurationError& e) {
    throw IoError(std::string("imu record: ") + e.what());
  }
  return rec;
}

void write_calibration(std::ostream& out, const CalibrationResult& result) {
  write_header(out, "calibration");
  std::string line;
  auto emit = [&] {
    out << line << '\n';
    line.clear();
  };
  put(line, "r_im");
  put_matrix(line, result.r_im);
  emit();
  for (int s = 0; s < kSensorCount; ++s) {
    const std::string idx = std::to_string(s);
    put(line, "heading");
    put(line, idx);
    put_matrix(line, result.heading[s]);
    emit();
    put(line, "r_sb");
    put(line, idx);
    put_matrix(line, result.r_sb[s]);
    emit();
    put(line, "displacement");
    put(line, idx);
    for (int i = 0; i < 3; ++i) put(line, result.displacement[s](i));
    emit();
    put(line, "terminal_speed");
    put(line, idx);
    put(line, result.terminal_speed[s]);
    emit();
    put(line, "pose_error_deg");
    put(line, idx);
    put(line, result.pose_check.angle_deg[s]);
    emit();
  }
  if (!out) throw IoError("write failed");
}

CalibrationResult read_calibration(std::istream& in) {
  Reader r(in, "calibration");
  CalibrationResult c;
  std::vector<std::string_view> t;
  while (r.next(t)) {
    if (t.empty()) continue;
    const std::string_view key = t[0];
    if (key == "r_im") {
      r.expect_columns(t, 10);
      c.r_im = read_matrix(r, t, 1);
      continue;
    }
    if (t.size() < 3) r.fail("truncated record");
    const int s = r.integer(t[1]);
    if (s < 0 || s >= kSensorCount) r.fail("sensor index out of range");
    if (key == "heading" || key == "r_sb") {
      r.expect_columns(t, 11);
      (key == "heading" ? c.heading[s] : c.r_sb[s]) = read_matrix(r, t, 2);
    } else if (key == "displacement") {
      r.expect_columns(t, 5);
      c.displacement[s] = Vec3(r.number(t[2]), r.number(t[3]), r.number(t[4]));
    } else if (key == "terminal_speed") {
      r.expect_columns(t, 3);
      c.terminal_speed[s] = r.number(t[2]);
    } else if (key == "pose_error_deg") {
      r.expect_columns(t, 3);
      c.pose_check.angle_deg[s] = r.number(t[2]);
    } else {
      r.fail("unknown key '" + std::string(key) + "'");
    }
  }
  return c;
}

StateWriter::StateWriter(std::ostream& out, int dof_count, double rate) : out_(out), dof_(dof_count) {
  write_header(out_, "states");
  out_ << "# rate " << text(rate) << '\n' << "# dof " << dof_ << '\n';
}

void StateWriter::write(const FrameOutput& f) {
  line_.clear();
  put(line_, std::to_string(f.frame));
  put(line_, f.timestamp);
  put(line_, f.dropped ? "1" : "0");
  put(line_, f.e_norm);
  for (int i = 0; i < dof_; ++i) put(line_, f.state.q(i));
  for (int i = 0; i < dof_; ++i) put(line_, f.state.qdot(i));
  for (const auto& c : f.contacts.endpoints) {
    const char code = status_code(c.status);
    put(line_, std::string_view(&code, 1));
  }
  for (const auto& c : f.contacts.endpoints) {
    if (c.surface_height) {
      put(line_, *c.surface_height);
    } else {
      put(line_, "-");
    }
  }
  for (const auto& c : f.contacts.endpoints) {
    for (int i = 0; i < 3; ++i) put(line_, c.lambda(i));
  }
  for (int i = 0; i < dof_; ++i) put(line_, f.tau_star.size() == dof_ ? f.tau_star(i) : 0.0);
  for (int i = 0; i < 6; ++i) put(line_, f.residual(i));
  out_ << line_ << '\n';
  if (!out_) throw IoError("write failed");
}

MotionSequence read_states_as_motion(std::istream& in) {
  Reader r(in, "states");
  r.read_preamble();
  MotionSequence m;
  m.rate = r.meta_number("rate");
  const int n = static_cast<int>(r.meta_number("dof"));
  const std::size_t columns = 4 + 2 * n + 5 + 5 + 15 + n + 6;
  std::vector<std::string_view> t;
  while (r.next(t)) {
    r.expect_columns(t, columns);
    m.root.emplace_back(r.number(t[4]), r.number(t[5]), r.number(t[6]));
    VecX theta(n - 3);
    for (int i = 0; i < n - 3; ++i) theta(i) = r.number(t[7 + i]);
    m.theta.push_back(std::move(theta));
  }
  return m;
}

MotionSequence read_trajectory(const std::string& path) {
  const std::string kind = record_kind(path);
  std::ifstream in = open_input(path);
  if (kind == "motion") return read_motion(in);
  if (kind == "states") return read_states_as_motion(in);
  throw IoError("'" + path + "' holds " + kind + " records, expected motion or states");
}

}  // namespace phystrack
