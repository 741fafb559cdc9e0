#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "phystrack/calibration.hpp"
#include "phystrack/pipeline.hpp"
#include "phystrack/synth.hpp"

namespace phystrack {

// Line-delimited text records. Every file opens with "# phystrack <kind> v1",
// followed by "# key value..." metadata lines and then one record per line.
// Numbers are written in shortest round-trip form, so a write/read cycle is
// exact. Readers throw IoError with the line number on malformed input.

/// Header kind of a record file ("motion", "frames", ...), without consuming it.
std::string record_kind(const std::string& path);

/// Columns: t tx ty tz e0..e{3k-1}, then c0..c4 (0/1) when the sequence
/// carries contacts.
void write_motion(std::ostream& out, const MotionSequence& motion);
MotionSequence read_motion(std::istream& in);

/// Columns: t v_par vx vy vz s0..s4 has_g gx gy gz e0..e{3k-1}.
void write_frames(std::ostream& out, const std::vector<EstimatorFrame>& frames);
std::vector<EstimatorFrame> read_frames(std::istream& in);

struct ImuRecording {
  ImuLog log;
  std::optional<Vec3> gravity_inertial;
};
/// One line per sample: t sensor ax ay az wx wy wz r00 r01 .. r22 (R_IS row
/// major), grouped by frame.
void write_imu(std::ostream& out, const ImuRecording& rec);
ImuRecording read_imu(std::istream& in);

/// Keyed lines: "r_im", "heading i", "r_sb i" (9 numbers, row major),
/// "displacement i" (3), "terminal_speed i", "pose_error_deg i".
void write_calibration(std::ostream& out, const CalibrationResult& result);
/// Reads back what write_calibration stores; the step window is left empty.
CalibrationResult read_calibration(std::istream& in);

/// Streaming writer for tracker output. Columns: frame t dropped e_norm
/// q[n] qdot[n] status[5] (F/P/C) surface[5] ("-" if none) lambda[15]
/// tau[n] residual[6].
class StateWriter {
 public:
  StateWriter(std::ostream& out, int dof_count, double rate);
  void write(const FrameOutput& frame);

 private:
  std::ostream& out_;
  int dof_;
  std::string line_;
};

/// Configurations from a states file, as a motion sequence (no contacts).
MotionSequence read_states_as_motion(std::istream& in);

/// A motion or states file as a motion sequence.
MotionSequence read_trajectory(const std::string& path);

/// Opened streams that throw IoError when the file cannot be opened.
std::ifstream open_input(const std::string& path);
std::ofstream open_output(const std::string& path);

}  // namespace phystrack
