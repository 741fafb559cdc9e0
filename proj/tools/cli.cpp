#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "phystrack/error.hpp"
#include "phystrack/metrics.hpp"
#include "phystrack/pipeline.hpp"
#include "phystrack/records.hpp"
#include "phystrack/rotation.hpp"
#include "phystrack/synth.hpp"

namespace phystrack::cli {
namespace {

// Logs go to stderr so reports on stdout stay clean. PHYSTRACK_LOG takes a
// level name (trace, debug, info, warn, error, critical, off).
void setup_logging() {
  static bool done = false;
  if (!done) {
    spdlog::set_default_logger(spdlog::stderr_color_st("phystrack"));
    done = true;
  }
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("PHYSTRACK_LOG")) level = spdlog::level::from_str(env);
  spdlog::set_level(level);
}

SkeletonModel load_model(const std::string& path) {
  return path.empty() ? SkeletonModel::humanoid() : SkeletonModel::load(path);
}

// ---- synth ---------------------------------------------------------------

struct SynthArgs {
  std::string scenario;
  std::string noise = "none";
  std::string motion, frames, imu, calibration_truth;
  std::vector<double> drift_deg;
  double acc_noise = 0.0;
  std::uint64_t seed = 0;
  bool list = false;
};

void add_synth(CLI::App& app, SynthArgs& a) {
  CLI::App* s = app.add_subcommand("synth", "Generate a synthetic scenario");
  s->add_flag("--list", a.list, "Print the scenario names");
  s->add_option("--scenario", a.scenario, "Scenario name");
  s->add_option("--noise", a.noise,
                "Estimator noise, e.g. angle_deg=1,velocity=0.05,seed=3,contacts=truth,gravity=off")
      ->capture_default_str();
  s->add_option("--motion", a.motion, "Write the ground-truth motion");
  s->add_option("--frames", a.frames, "Write the estimator frames");
  s->add_option("--imu", a.imu, "Write the synthetic IMU log");
  s->add_option("--calibration-truth", a.calibration_truth,
                "calibration-walk only: write the true calibration");
  s->add_option("--drift-deg", a.drift_deg, "calibration-walk only: heading drift per sensor [deg]")
      ->expected(kSensorCount)
      ->delimiter(',');
  s->add_option("--acc-noise", a.acc_noise, "calibration-walk only: accelerometer noise [m/s^2]");
  s->add_option("--seed", a.seed, "Seed for IMU noise and mountings");
}

int run_synth(const SynthArgs& a) {
  if (a.list) {
    for (const auto& n : scenario_names()) std::cout << n << '\n';
    return kOk;
  }
  if (a.scenario.empty()) throw ConfigurationError("synth: --scenario is required");
  if (a.motion.empty() && a.frames.empty() && a.imu.empty() && a.calibration_truth.empty()) {
    throw ConfigurationError("synth: nothing to write (give --motion, --frames, --imu or --calibration-truth)");
  }
  const SkeletonModel& model = SkeletonModel::humanoid();
  const Scenario sc = make_scenario(model, a.scenario);
  if (!a.motion.empty()) {
    auto out = open_output(a.motion);
    write_motion(out, sc.motion);
  }
  if (!a.frames.empty()) {
    auto out = open_output(a.frames);
    write_frames(out, synthesize_estimator_frames(model, sc.motion, EstimatorNoise::parse(a.noise)));
  }
  const bool calibration = a.scenario == "calibration-walk";
  if (!calibration && (!a.calibration_truth.empty() || !a.drift_deg.empty() || a.acc_noise != 0.0)) {
    throw ConfigurationError("synth: calibration options need --scenario calibration-walk");
  }
  if (calibration && (!a.imu.empty() || !a.calibration_truth.empty())) {
    CalibrationLogOptions opt;
    for (std::size_t i = 0; i < a.drift_deg.size(); ++i) opt.drift[i] = a.drift_deg[i] * M_PI / 180.0;
    opt.acc_noise = a.acc_noise;
    opt.seed = a.seed;
    const SyntheticCalibration cal = synthesize_calibration(model, opt);
    if (!a.imu.empty()) {
      auto out = open_output(a.imu);
      write_imu(out, ImuRecording{cal.log, cal.gravity_inertial});
    }
    if (!a.calibration_truth.empty()) {
      // The heading fix that undoes each sensor's drift relative to the pelvis.
      CalibrationResult truth;
      truth.r_im = cal.r_im;
      truth.r_sb = cal.r_sb;
      const Vec3 up = -cal.gravity_inertial.normalized();
      for (int i = 0; i < kSensorCount; ++i) truth.heading[i] = axis_angle(up, cal.drift[5] - cal.drift[i]);
      auto out = open_output(a.calibration_truth);
      write_calibration(out, truth);
    }
  } else if (!a.imu.empty()) {
    auto out = open_output(a.imu);
    write_imu(out, ImuRecording{synthesize_imu(model, sc.motion, default_attachments(model)),
                                model.gravity()});
  }
  return kOk;
}

// ---- calibrate -----------------------------------------------------------

struct CalibrateArgs {
  std::string input, output;
  std::vector<double> gravity;
  double pose_tolerance_deg = 10.0;
  double margin = 0.1;
};

void add_calibrate(CLI::App& app, CalibrateArgs& a) {
  CLI::App* s = app.add_subcommand("calibrate", "Walking calibration from an IMU log");
  s->add_option("--input", a.input, "IMU log")->required();
  s->add_option("--output", a.output, "Calibration result")->required();
  s->add_option("--gravity", a.gravity, "Inertial gravity vector (default: from the log)")->expected(3);
  s->add_option("--pose-tolerance", a.pose_tolerance_deg, "Stand-pose return tolerance [deg]")
      ->capture_default_str();
  s->add_option("--margin", a.margin, "Integration margin around the step [s]")->capture_default_str();
}

int run_calibrate(const CalibrateArgs& a) {
  auto in = open_input(a.input);
  const ImuRecording rec = read_imu(in);
  Vec3 g;
  if (!a.gravity.empty()) {
    g = Vec3(a.gravity[0], a.gravity[1], a.gravity[2]);
  } else if (rec.gravity_inertial) {
    g = *rec.gravity_inertial;
  } else {
    throw ConfigurationError("calibrate: the log has no gravity metadata; pass --gravity");
  }
  CalibrationOptions opt;
  opt.pose_tolerance_deg = a.pose_tolerance_deg;
  opt.margin = a.margin;
  const CalibrationResult r = calibrate(rec.log, g, opt);
  auto out = open_output(a.output);
  write_calibration(out, r);
  for (int i = 0; i < kSensorCount; ++i) {
    spdlog::info("sensor {} ({}): heading fix {:.3f} deg, step {:.3f} m", i, kSensorBones[i],
                 rotation_angle(r.heading[i]) * 180.0 / M_PI, r.displacement[i].norm());
  }
  return kOk;
}

// CLI11 only reads config files on the top-level app, so subcommand config
// is applied by hand. Values fill options that were not given as flags.
void apply_config_file(CLI::App& sub, const std::string& path) {
  if (path.empty()) return;
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path);
  } catch (const CLI::FileError& e) {
    throw IoError(std::string("config: ") + e.what());
  }
  for (const CLI::ConfigItem& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty()) throw ConfigurationError("config: sections are not supported ('" + item.fullname() + "')");
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + item.name);
    } catch (const CLI::OptionNotFound&) {
      throw ConfigurationError("config: unknown key '" + item.name + "'");
    }
    if (item.name == "config") throw ConfigurationError("config: files cannot include other files");
    if (opt->count() > 0) continue;
    try {
      for (const std::string& v : item.inputs) opt->add_result(v);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigurationError("config key '" + item.name + "': " + e.what());
    }
  }
}

// ---- track ---------------------------------------------------------------

struct TrackArgs {
  std::string config, input, output, skeleton;
  bool timing = false;
  // Overrides; unset keeps the model-scaled defaults.
  std::optional<double> kp_theta, kd_theta, kp_r, kd_r, beta_tau, beta_tau_star, dt, d_th, pull_factor;
  std::optional<double> beta_lambda, mu, e_th, stationary_threshold, height_tolerance, pairing_distance;
  std::optional<int> counter_threshold;
  std::string integrator = "semi-implicit";
  bool no_gravity_correction = false;
  double timestamp_tolerance = 1e-6;
};

void add_track(CLI::App& app, TrackArgs& a) {
  CLI::App* s = app.add_subcommand("track", "Physics-based tracking of an estimator frame stream");
  s->add_option("--config", a.config, "TOML/INI file of option values (keys as the long flags); flags win");
  s->add_option("--input", a.input, "Estimator frames")->required();
  s->add_option("--output", a.output, "Output states")->required();
  s->add_option("--skeleton", a.skeleton, "Skeleton file (default: bundled humanoid)");
  s->add_flag("--timing", a.timing, "Report wall time per frame on stderr");
  s->add_option("--kp-theta", a.kp_theta, "Joint angle stiffness [1/s^2]");
  s->add_option("--kd-theta", a.kd_theta, "Joint angle damping [1/s]");
  s->add_option("--kp-r", a.kp_r, "Joint position stiffness [1/s^2]");
  s->add_option("--kd-r", a.kd_r, "Joint position damping [1/s]");
  s->add_option("--beta-tau", a.beta_tau, "Pre-tracking torque regularization");
  s->add_option("--beta-tau-star", a.beta_tau_star, "Re-tracking torque regularization");
  s->add_option("--dt", a.dt, "Frame period [s]");
  s->add_option("--d-th", a.d_th, "Contact reference pull-down range [m]");
  s->add_option("--pull-factor", a.pull_factor, "Contact reference pull factor");
  s->add_option("--beta-lambda", a.beta_lambda, "Contact force regularization");
  s->add_option("--mu", a.mu, "Friction coefficient");
  s->add_option("--e-th", a.e_th, "Residual threshold for contact acceptance");
  s->add_option("--stationary-threshold", a.stationary_threshold, "Stationary probability threshold");
  s->add_option("--height-tolerance", a.height_tolerance, "Surface height tolerance [m]");
  s->add_option("--pairing-distance", a.pairing_distance, "Horizontal distance for joining a contact [m]");
  s->add_option("--counter-threshold", a.counter_threshold, "Frames before a contact is committed");
  s->add_option("--integrator", a.integrator, "semi-implicit or explicit")
      ->check(CLI::IsMember({"semi-implicit", "explicit"}))
      ->capture_default_str();
  s->add_flag("--no-gravity-correction", a.no_gravity_correction, "Ignore frame gravity estimates");
  s->add_option("--timestamp-tolerance", a.timestamp_tolerance, "Allowed timestamp jitter [s]")
      ->capture_default_str();
}

PipelineConfig pipeline_config(const SkeletonModel& model, const TrackArgs& a) {
  PipelineConfig c;
  c.skeleton = a.skeleton;
  c.tracking = TrackingConfig::for_model(model);
  TrackingConfig& t = c.tracking;
  auto set = [](auto& field, const auto& value) {
    if (value) field = *value;
  };
  set(t.kp_theta, a.kp_theta);
  set(t.kd_theta, a.kd_theta);
  set(t.kp_r, a.kp_r);
  set(t.kd_r, a.kd_r);
  set(t.beta_tau, a.beta_tau);
  set(t.beta_tau_star, a.beta_tau_star);
  set(t.dt, a.dt);
  set(t.d_th, a.d_th);
  set(t.pull_factor, a.pull_factor);
  t.integrator = a.integrator == "explicit" ? Integrator::kExplicit : Integrator::kSemiImplicit;
  ContactConfig& k = c.contact;
  set(k.beta_lambda, a.beta_lambda);
  set(k.mu, a.mu);
  set(k.e_th, a.e_th);
  set(k.stationary_threshold, a.stationary_threshold);
  set(k.height_tolerance, a.height_tolerance);
  set(k.pairing_distance, a.pairing_distance);
  set(k.counter_threshold, a.counter_threshold);
  c.gravity_correction = !a.no_gravity_correction;
  c.timestamp_tolerance = a.timestamp_tolerance;
  c.validate();
  return c;
}

int run_track(const TrackArgs& a) {
  const SkeletonModel model = load_model(a.skeleton);
  const PipelineConfig config = pipeline_config(model, a);
  auto in = open_input(a.input);
  const std::vector<EstimatorFrame> frames = read_frames(in);
  auto out = open_output(a.output);
  StateWriter writer(out, model.dof_count(), 1.0 / config.tracking.dt);
  Pipeline pipeline(model, config);
  int dropped = 0;
  double seconds = 0.0;
  for (const EstimatorFrame& f : frames) {
    const auto start = std::chrono::steady_clock::now();
    const FrameOutput o = pipeline.step(f);
    seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    dropped += o.dropped ? 1 : 0;
    writer.write(o);
  }
  out.flush();
  if (!out) throw IoError("cannot write '" + a.output + "'");
  if (dropped > 0) spdlog::warn("{} of {} frames dropped", dropped, frames.size());
  if (a.timing && !frames.empty()) {
    std::cerr << "frames " << frames.size() << " ms/frame " << 1e3 * seconds / frames.size() << '\n';
  }
  return kOk;
}

// ---- eval ----------------------------------------------------------------

struct EvalArgs {
  std::string pred, truth, csv, report, skeleton;
  double reference_distance = 7.0;
};

void add_eval(CLI::App& app, EvalArgs& a) {
  CLI::App* s = app.add_subcommand("eval", "Compare a tracked or synthetic trajectory with the truth");
  s->add_option("--pred", a.pred, "Predicted states or motion")->required();
  s->add_option("--truth", a.truth, "Ground-truth motion or states")->required();
  s->add_option("--report", a.report, "Write the report here instead of stdout");
  s->add_option("--csv", a.csv, "Write the drift curve as CSV");
  s->add_option("--skeleton", a.skeleton, "Skeleton file (default: bundled humanoid)");
  s->add_option("--reference-distance", a.reference_distance, "Distance for the drift percentage [m]")
      ->capture_default_str();
}

std::vector<VecX> configurations(const MotionSequence& m) {
  std::vector<VecX> q;
  q.reserve(m.length());
  for (int f = 0; f < m.length(); ++f) q.push_back(m.configuration(f));
  return q;
}

int run_eval(const EvalArgs& a) {
  const SkeletonModel model = load_model(a.skeleton);
  const MotionSequence pred = read_trajectory(a.pred);
  const MotionSequence truth = read_trajectory(a.truth);
  pred.validate(model);
  truth.validate(model);
  if (pred.length() != truth.length()) {
    throw ConfigurationError("eval: " + std::to_string(pred.length()) + " predicted frames vs " +
                             std::to_string(truth.length()) + " ground-truth frames");
  }
  if (std::abs(pred.rate - truth.rate) > 1e-9) throw ConfigurationError("eval: frame rates differ");
  const EvalReport r = evaluate(model, configurations(pred), configurations(truth), truth.dt(),
                                a.reference_distance);
  const std::string text = format_report(r);
  if (a.report.empty()) {
    std::cout << text;
  } else {
    auto out = open_output(a.report);
    out << text;
  }
  if (!a.csv.empty()) {
    auto out = open_output(a.csv);
    out << format_drift_csv(r.drift);
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  setup_logging();
  CLI::App app{"Physics-based motion capture from sparse sensors"};
  app.require_subcommand(1);
  SynthArgs synth;
  CalibrateArgs cal;
  TrackArgs track;
  EvalArgs eval;
  add_synth(app, synth);
  add_calibrate(app, cal);
  add_track(app, track);
  add_eval(app, eval);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  try {
    if (app.got_subcommand("synth")) return run_synth(synth);
    if (app.got_subcommand("calibrate")) return run_calibrate(cal);
    if (app.got_subcommand("track")) {
      apply_config_file(*app.get_subcommand("track"), track.config);
      return run_track(track);
    }
    return run_eval(eval);
  } catch (const IoError& e) {
    spdlog::error("{}", e.what());
    return kIo;
  } catch (const NumericalError& e) {
    spdlog::error("{}", e.what());
    return kNumerical;
  } catch (const ConfigurationError& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  }
}

}  // namespace phystrack::cli
