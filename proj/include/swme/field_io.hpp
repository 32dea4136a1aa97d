#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "swme/solver.hpp"

namespace swme {

enum class CutKind { AlongX, AlongY, Diagonal };  // y=0.5, x=0.5, y=x
std::string cut_name(CutKind c);

// One sample per cell along the cut. Axis cuts through the domain centre
// average the two neighbouring rows when the cell count is even.
struct CutLine {
  CutKind kind = CutKind::AlongX;
  int moments = 2;  // columns emitted; absent moments are written as zeros
  std::vector<double> s, x, y, r;  // r: signed distance from the domain centre
  std::vector<std::vector<double>> values;  // per sample: h, u_m, v_m, alpha_1.., beta_1..

  double h(std::size_t k) const { return values[k][0]; }
  std::size_t size() const { return s.size(); }
};

CutLine extract_cut(const FieldState& st, CutKind kind, int min_moments = 2);

void write_snapshot(std::ostream& os, const FieldState& st, const std::string& variant);
void write_cut(std::ostream& os, const CutLine& cut);

// Float formatting shared by all writers (shortest round-trip form).
std::string fmt(double v);

// Snapshot, cut-line and conservation observers writing into a directory.
class SnapshotWriter : public Observer {
 public:
  SnapshotWriter(std::string dir, std::string variant, std::string tag);
  void on_output(const FieldState& st) override;
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::string dir_, variant_, tag_;
  std::vector<std::string> files_;
};

class CutLineWriter : public Observer {
 public:
  CutLineWriter(std::string dir, std::string tag);
  void on_output(const FieldState& st) override;
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::string dir_, tag_;
  std::vector<std::string> files_;
};

class ConservationMonitor : public Observer {
 public:
  void on_start(const FieldState& st) override;
  void on_step(const FieldState& st, const StepStats& stats) override;
  double initial_mass() const { return m0_; }
  double max_relative_drift() const { return max_drift_; }
  void write(std::ostream& os) const;

 private:
  struct Row {
    double t, dt, mass, drift;
  };
  double m0_ = 0.0;
  double max_drift_ = 0.0;
  std::vector<Row> rows_;
};

}  // namespace swme
