#pragma once

#include <complex>
#include <string>
#include <vector>

#include "kinklab/banded.hpp"
#include "kinklab/numerics.hpp"

namespace kinklab {

// d = 3 Cahn-Hilliard run around the kink: x longitudinal on [-L, L], two
// transverse axes on a periodic square of side Lperp with M points each.
struct SimulationConfig {
  Grid1D grid{40.0, 512};
  double Lperp = 192.0;
  int M = 128;
  double dt = 0.05;
  double T = 200.0;
  double delta = 0.1;
  double r = 5.0;
  std::string shape = "algebraic";  // algebraic | smooth | gaussian
  std::string out_dir = ".";

  // not part of the config file
  bool nonlinear = true;
  double window_lo = 10.0;
  double window_hi = 100.0;
  int threads = 0;
};

// Flat key-value file, one `key = value` per line, '#' comments.
SimulationConfig load_config(const std::string& path);
void validate(const SimulationConfig& cfg);

// h sampled on the grid, x-major: h[(i*M + j1)*M + j2], transverse origin at j = M/2.
struct Perturbation {
  std::vector<double> h;
  double A_exact = 0.0;  // closed-form integral over R^3
  double A_quad = 0.0;   // discrete integral of the samples
};

// algebraic: delta (1+|x|)^{-r}; smooth: delta (1+|x|^2)^{-r/2}; gaussian: delta exp(-|x|^2/2).
Perturbation make_perturbation(const SimulationConfig& cfg);

struct DiagnosticsRecord {
  double t = 0.0;
  double center_amp = 0.0;  // v(0, xhat = 0)
  double half_width = 0.0;  // transverse radius where v(0, .) halves
  double mass = 0.0;        // integral of v over the box
  double norm_X = 0.0;
  double norm_t = 0.0;
  double A_est = 0.0;       // integral of the zero transverse mode over x
};

struct WeightedNorms {
  double X = 0.0;
  double t = 0.0;
};

// Allocator with the alignment FFTW's SIMD kernels expect.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) {}
  T* allocate(std::size_t n);
  void deallocate(T* p, std::size_t) noexcept;
  template <class U>
  bool operator==(const AlignedAllocator<U>&) const { return true; }
};

class Simulator {
 public:
  explicit Simulator(const SimulationConfig& cfg);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  const SimulationConfig& config() const { return cfg_; }
  double time() const { return t_; }
  long steps() const { return steps_; }
  int modes() const { return Mc_; }
  double A_exact() const { return A_exact_; }
  double A_quad() const { return A_quad_; }
  // largest |v| met by the nonlinear stage so far
  double max_seen() const { return max_seen_; }

  void set_field(const std::vector<double>& v);
  void step();
  void advance_to(double t);

  // physical v, same layout as Perturbation::h
  std::vector<double> field() const;
  // x-profile of the transverse Fourier coefficient at lattice index (m1, m2), m2 in [0, M/2]
  std::vector<std::complex<double>> mode(int m1, int m2) const;
  double wavenumber(int m1, int m2) const;

  double mass() const;
  double max_abs() const;
  WeightedNorms norms() const;
  DiagnosticsRecord diagnostics() const;

  // v(0, xhat1, 0) at arbitrary xhat1, band-limited interpolation along the axis.
  std::vector<double> center_line() const;
  double center_profile(double xhat1) const;
  // front displacement a(xhat1) along xhat2 = 0 from u ~ u0(x - a) on |x| <= 10
  std::vector<double> front_displacement() const;

 private:
  void nonlinear_term(const std::complex<double>* vhat, std::complex<double>* out);
  void solve_linear(std::complex<double>* rhs, bool euler);
  // LU without pivoting of shift*I + D_k H_k for every |k|^2 group, stored
  // row-major as [i * groups + g]; checked against a known solution when built
  struct Factors {
    std::vector<double> l1, l2, piv, u1, u2;
  };
  Factors build_factors(double shift) const;
  void to_physical(const std::complex<double>* vhat, double* v) const;
  std::vector<double> center_plane() const;

  SimulationConfig cfg_;
  int N_ = 0, M_ = 0, Mh_ = 0, Mc_ = 0;
  double h_ = 0.0, hp_ = 0.0;
  double t_ = 0.0;
  long steps_ = 0;
  double A_exact_ = 0.0, A_quad_ = 0.0, max_seen_ = 0.0;
  std::vector<double> u0_, lin_;
  std::vector<int> group_of_;
  std::vector<std::vector<int>> groups_;
  std::vector<double> group_k2_;
  Factors sbdf_;
  using CVec = std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;
  CVec vhat_, vprev_, nhat_, nprev_, work_;
  mutable CVec cbuf_;
  std::vector<double, AlignedAllocator<double>> phys_;
  void* fwd_ = nullptr;
  void* inv_ = nullptr;
  void* inv1_ = nullptr;
};

WeightedNorms weighted_norms(const Simulator& sim);

struct MeasureResult {
  std::vector<DiagnosticsRecord> records;
  double A_exact = 0.0;
  double A_quad = 0.0;
  double amp_slope = 0.0;
  double width_slope = 0.0;
  double collapse_mismatch = 0.0;  // at t = window_hi, relative to phi*(0)
  double mass_drift = 0.0;         // relative mass change per unit time
  double max_v = 0.0;
  double seconds = 0.0;
  std::vector<std::string> files;  // written under out_dir
};

// Evolves to cfg.T, sampling diagnostics logarithmically in t; writes
// diagnostics.csv and centre-plane field dumps under out_dir when write_files.
MeasureResult run_and_measure(const SimulationConfig& cfg, bool write_files = true);

// Least-squares slope of log|y| against log t over records with t in [lo, hi].
double log_slope(const std::vector<DiagnosticsRecord>& rec, double lo, double hi, bool width);

}  // namespace kinklab
