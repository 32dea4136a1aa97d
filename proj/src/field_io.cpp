#include "swme/field_io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace swme {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string cut_name(CutKind c) {
  switch (c) {
    case CutKind::AlongX: return "y=0.5";
    case CutKind::AlongY: return "x=0.5";
    case CutKind::Diagonal: return "y=x";
  }
  return "?";
}

namespace {

std::string cut_file_tag(CutKind c) {
  switch (c) {
    case CutKind::AlongX: return "y0.5";
    case CutKind::AlongY: return "x0.5";
    case CutKind::Diagonal: return "diag";
  }
  return "?";
}

void push_sample(CutLine& cut, const double* a, const double* b, int N, double g) {
  // b == nullptr: single cell; otherwise the average of two cells
  const int m = 2 * N + 3;
  std::vector<double> U(m);
  for (int k = 0; k < m; ++k) U[k] = b ? 0.5 * (a[k] + b[k]) : a[k];
  PrimitiveState V;
  primitive_from(U.data(), N, g, V);
  const int K = cut.moments;
  std::vector<double> row;
  row.reserve(3 + 2 * K);
  row.push_back(V.h);
  row.push_back(V.um);
  row.push_back(V.vm);
  for (int i = 0; i < K; ++i) row.push_back(i < N ? V.alpha[i] : 0.0);
  for (int i = 0; i < K; ++i) row.push_back(i < N ? V.beta[i] : 0.0);
  cut.values.push_back(std::move(row));
}

}  // namespace

CutLine extract_cut(const FieldState& st, CutKind kind, int min_moments) {
  const Grid2D& G = st.grid;
  CutLine cut;
  cut.kind = kind;
  cut.moments = std::max(st.N, min_moments);
  const double cx = G.x0 + 0.5 * G.nx * G.dx, cy = G.y0 + 0.5 * G.ny * G.dy;
  switch (kind) {
    case CutKind::AlongX: {
      const int lo = (G.ny - 1) / 2, hi = G.ny / 2;
      for (int i = 0; i < G.nx; ++i) {
        push_sample(cut, st.cell(i, lo), lo == hi ? nullptr : st.cell(i, hi), st.N, 1.0);
        cut.s.push_back(G.xc(i));
        cut.x.push_back(G.xc(i));
        cut.y.push_back(cy);
        cut.r.push_back(G.xc(i) - cx);
      }
      break;
    }
    case CutKind::AlongY: {
      const int lo = (G.nx - 1) / 2, hi = G.nx / 2;
      for (int j = 0; j < G.ny; ++j) {
        push_sample(cut, st.cell(lo, j), lo == hi ? nullptr : st.cell(hi, j), st.N, 1.0);
        cut.s.push_back(G.yc(j));
        cut.x.push_back(cx);
        cut.y.push_back(G.yc(j));
        cut.r.push_back(G.yc(j) - cy);
      }
      break;
    }
    case CutKind::Diagonal: {
      if (G.nx != G.ny || G.dx != G.dy)
        throw std::invalid_argument("diagonal cut needs a square grid with square cells");
      for (int i = 0; i < G.nx; ++i) {
        push_sample(cut, st.cell(i, i), nullptr, st.N, 1.0);
        const double x = G.xc(i), y = G.yc(i);
        cut.s.push_back(std::sqrt((x - G.x0) * (x - G.x0) + (y - G.y0) * (y - G.y0)));
        cut.x.push_back(x);
        cut.y.push_back(y);
        const double d = std::sqrt((x - cx) * (x - cx) + (y - cy) * (y - cy));
        cut.r.push_back(x < cx ? -d : d);
      }
      break;
    }
  }
  return cut;
}

void write_cut(std::ostream& os, const CutLine& cut) {
  os << "# cut " << cut_name(cut.kind) << "\n";
  os << "s,x,y,r,h,u_m,v_m";
  for (int i = 1; i <= cut.moments; ++i) os << ",alpha_" << i;
  for (int i = 1; i <= cut.moments; ++i) os << ",beta_" << i;
  os << "\n";
  for (std::size_t k = 0; k < cut.size(); ++k) {
    os << fmt(cut.s[k]) << "," << fmt(cut.x[k]) << "," << fmt(cut.y[k]) << "," << fmt(cut.r[k]);
    for (double v : cut.values[k]) os << "," << fmt(v);
    os << "\n";
  }
}

void write_snapshot(std::ostream& os, const FieldState& st, const std::string& variant) {
  const Grid2D& G = st.grid;
  os << "# nx=" << G.nx << " ny=" << G.ny << " dx=" << fmt(G.dx) << " dy=" << fmt(G.dy)
     << " t=" << fmt(st.time) << " N=" << st.N << " variant=" << variant << "\n";
  os << "i,j,x,y,h,u_m,v_m";
  for (int i = 1; i <= st.N; ++i) os << ",alpha_" << i;
  for (int i = 1; i <= st.N; ++i) os << ",beta_" << i;
  os << "\n";
  PrimitiveState V;
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) {
      primitive_from(st.cell(i, j), st.N, 1.0, V);
      os << i << "," << j << "," << fmt(G.xc(i)) << "," << fmt(G.yc(j)) << "," << fmt(V.h) << ","
         << fmt(V.um) << "," << fmt(V.vm);
      for (double a : V.alpha) os << "," << fmt(a);
      for (double b : V.beta) os << "," << fmt(b);
      os << "\n";
    }
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

}  // namespace

SnapshotWriter::SnapshotWriter(std::string dir, std::string variant, std::string tag)
    : dir_(std::move(dir)), variant_(std::move(variant)), tag_(std::move(tag)) {}

void SnapshotWriter::on_output(const FieldState& st) {
  const std::string path =
      (std::filesystem::path(dir_) / ("snapshot_" + tag_ + "_t" + fmt(st.time) + ".csv")).string();
  auto f = open_out(path);
  write_snapshot(f, st, variant_);
  files_.push_back(path);
}

CutLineWriter::CutLineWriter(std::string dir, std::string tag)
    : dir_(std::move(dir)), tag_(std::move(tag)) {}

void CutLineWriter::on_output(const FieldState& st) {
  for (CutKind k : {CutKind::AlongX, CutKind::AlongY, CutKind::Diagonal}) {
    if (k == CutKind::Diagonal && (st.grid.nx != st.grid.ny || st.grid.dx != st.grid.dy)) continue;
    const std::string path = (std::filesystem::path(dir_) /
                              ("cut_" + tag_ + "_" + cut_file_tag(k) + "_t" + fmt(st.time) + ".csv"))
                                 .string();
    auto f = open_out(path);
    write_cut(f, extract_cut(st, k));
    files_.push_back(path);
  }
}

void ConservationMonitor::on_start(const FieldState& st) {
  m0_ = st.mass();
  max_drift_ = 0.0;
  rows_.clear();
  rows_.push_back({st.time, 0.0, m0_, 0.0});
}

void ConservationMonitor::on_step(const FieldState& st, const StepStats& stats) {
  const double m = st.mass();
  const double d = std::abs(m - m0_) / std::abs(m0_);
  max_drift_ = std::max(max_drift_, d);
  rows_.push_back({st.time, stats.dt, m, d});
}

void ConservationMonitor::write(std::ostream& os) const {
  os << "t,dt,mass,relative_drift\n";
  for (const auto& r : rows_)
    os << fmt(r.t) << "," << fmt(r.dt) << "," << fmt(r.mass) << "," << fmt(r.drift) << "\n";
}

}  // namespace swme
