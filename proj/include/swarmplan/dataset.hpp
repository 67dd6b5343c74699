#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "swarmplan/scp.hpp"

namespace swarmplan {

/// The four problem families: 2D gravity-free with 1 agent + 1 obstacle or
/// 10 agents forming a circle; 3D CWH PRO transfers with 1 or 10 deputies.
enum class Family { Di2dSingle, Di2dTen, Cwh3dSingle, Cwh3dTen };

std::string_view to_string(Family f);           // "di2d-1", "di2d-10", "cwh3d-1", "cwh3d-10"
Family family_from_string(std::string_view s);  // throws std::invalid_argument

enum class SlotAssignment { Indexed, NearestGreedy };
enum class SemiAxis { AlongTrack, Radial };

/// Knobs that change what a family samples or how it is encoded.
struct FamilyOptions {
  SlotAssignment slots = SlotAssignment::Indexed;
  SemiAxis semi_axis = SemiAxis::AlongTrack;  // which PRO axis the sampled 25..75 refers to
  bool include_acceleration = false;          // 90-wide (3D) / 60-wide (2D) targets when set
  double mean_motion = kDefaultMeanMotion;
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxSamplingAttempts = 10000;
inline constexpr int kTargetKnots = 10;

int agents_in(Family f);
int dim_of(Family f);
int input_size(Family f);
int target_size(Family f, const FamilyOptions& opts = {});
/// Infers the family from scenario shape; throws std::invalid_argument if none fits.
Family family_of(const Scenario& sc);

Scenario sample_scenario(Family f, std::uint64_t seed, const FamilyOptions& opts = {});

/// Start/goal (position, velocity, zero acceleration) per agent, then (center, radius) per obstacle.
Eigen::VectorXd encode_input(const Scenario& sc);

/// Knot times used for network targets: t = 1..10 when T = 10, t = 10, 20, ..., 100 when T = 100.
std::vector<int> target_knots(int horizon);

/// Agent-major blocks; within a block, knots in time order, each knot (position, velocity[, acceleration]).
Eigen::VectorXd encode_target(const Scenario& sc, const PlanResult& plan, const FamilyOptions& opts = {});

/// Per agent, a (2d) x 10 matrix of knot states (acceleration entries are dropped).
std::vector<Eigen::MatrixXd> decode_target(const Eigen::VectorXd& target, Family f, const FamilyOptions& opts = {});

struct DatasetRecord {
  Family family = Family::Di2dSingle;
  std::uint64_t seed = 0;
  Scenario scenario;
  PlanResult plan;
  Eigen::VectorXd input;
  Eigen::VectorXd target;
};

struct GenerateSummary {
  int rejections = 0;  // non-converged instances that were resampled
  double fuel_mean = 0.0;
  double fuel_std = 0.0;
  double plan_seconds = 0.0;
};

/// Exactly `count` records with converged plans. Record k is sampled from seed + k;
/// a failed solve is resampled from a seed derived from (seed + k, attempt).
/// Parallel over records when jobs > 1; output is identical for any jobs.
std::vector<DatasetRecord> generate(Family f, int count, std::uint64_t seed, const ScpParams& params,
                                    const FamilyOptions& opts = {}, int jobs = 1,
                                    GenerateSummary* summary = nullptr);

struct SplitSpec {
  double train = 0.7;
  double val = 0.15;
  double test = 0.15;

  void validate() const;
};

struct SplitIndices {
  std::vector<std::size_t> train, val, test;
};

/// Seeded shuffle, then sizes floor(N*val), floor(N*test), remainder to train.
SplitIndices split(std::size_t n, const SplitSpec& spec, std::uint64_t seed);

}  // namespace swarmplan
