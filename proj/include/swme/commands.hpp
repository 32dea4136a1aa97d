#pragma once

#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "swme/closure_builder.hpp"
#include "swme/scenario.hpp"
#include "swme/spectral.hpp"

namespace swme {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

std::string tool_version();

struct CliOverrides {
  std::optional<std::string> out;
  std::optional<int> resolution;
  std::optional<std::string> variant;
  std::optional<int> order;
  std::optional<double> cfl;
  std::optional<int> seed;

  void apply(Config& cfg) const;
};

int cmd_simulate(const std::string& config_path, const CliOverrides& ov, std::ostream& log,
                 std::ostream& err);

// Random state used by the certification sweeps: h in [h_lo, h_hi], velocities
// and moments uniform in [-1,1].
PrimitiveState random_state(int N, std::mt19937_64& rng, double g = 1.0, double h_lo = 0.5,
                            double h_hi = 2.0);

struct CertifyOptions {
  std::vector<Variant> variants;
  std::vector<int> orders;
  // Random states per (variant, N). Odd-numbered samples are drawn with
  // h in [0.02, 0.2], where the moments dominate sqrt(gh); SWME only loses
  // hyperbolicity in that regime.
  int samples = 20;
  int angles = 16;      // random angles per state for the invariance residual
  int directions = 8;   // certification directions 2 pi k / directions (+ 0, pi/2, pi/4)
  unsigned seed = 1;
};

struct CornerResult {
  double beta1 = 0.0;
  Hyperbolicity classification = Hyperbolicity::NonHyperbolic;
  int geometric_um = 0;  // geometric multiplicity of u_m
  int algebraic_um = 0;
};

struct CertifyRow {
  Variant variant = Variant::HSWME;
  int N = 1;
  double max_invariance = 0.0;  // residual / (1 + |A|)
  Hyperbolicity worst_random = Hyperbolicity::Hyperbolic;
  int complex_states = 0;
  double min_gap = 0.0;         // over random states, relative to 1 + spectral radius
  double max_shortcut_deviation = 0.0;
  std::vector<CornerResult> corners;
  std::vector<std::string> contradictions;
};

// Classification the theorem table predicts; nullopt when nothing is claimed.
std::optional<Hyperbolicity> expected_class(Variant v, int N, bool corner, double beta1);

CertifyRow certify_one(Variant v, int N, const CertifyOptions& opt);
std::string format_certify_row(const CertifyRow& r);
int cmd_certify(const CertifyOptions& opt, const std::string& out_path, std::ostream& log,
                std::ostream& err);

int cmd_build_closure(int N, const std::vector<std::string>& targets, const std::string& out_path,
                      std::ostream& log, std::ostream& err);

int cmd_eigen_table(const ModelVariant& v, const PrimitiveState& V, const std::string& out_path,
                    std::ostream& log, std::ostream& err);

// Parses argv with the subcommands simulate, certify, build-closure, eigen-table.
int run_cli(int argc, char** argv);

}  // namespace swme
