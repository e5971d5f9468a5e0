#include "qsr/fock_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qsr/gkls.hpp"
#include "qsr/propagator.hpp"

namespace qsr {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr std::complex<double> kI{0.0, 1.0};

std::int64_t binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < k) return 0;
  std::int64_t acc = 1;
  for (std::int64_t i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
  return acc;
}

double op_norm2(const Mat2& a) {
  return Eigen::JacobiSVD<Mat2>(a).singularValues()(0);
}

}  // namespace

std::complex<double> ModeSet::u_hat(double t) const {
  std::complex<double> acc{};
  for (const Mode& m : modes) acc += m.lambda * m.lambda * std::exp(-kI * m.omega * t);
  return acc;
}

ModeSet discretize_bath(const BathKernel& k, double omega_max, int n_modes,
                        const std::string& rule, double t_work, double guard_fraction,
                        double tail_tol) {
  k.validate();
  if (n_modes < 1) throw std::invalid_argument("discretize_bath: n_modes must be >= 1");
  if (!(omega_max > 0.0)) throw std::invalid_argument("discretize_bath: omega_max must be positive");
  if (!(t_work >= 0.0)) throw std::invalid_argument("discretize_bath: t_work must be nonnegative");
  if (!(guard_fraction > 0.0) || guard_fraction > 1.0)
    throw std::invalid_argument("discretize_bath: guard_fraction must be in (0, 1]");
  const double tail = spectral_tail(k, omega_max);
  if (tail > tail_tol)
    throw std::invalid_argument("discretize_bath: spectral tail mass " + std::to_string(tail) +
                                " above tolerance at omega_max=" + std::to_string(omega_max));
  const double dw = omega_max / n_modes;
  if (dw * t_work > kTwoPi * guard_fraction)
    throw std::invalid_argument(
        "discretize_bath: working window exceeds the recurrence guard (delta_omega * t_work > "
        "2*pi*guard); increase n_modes or shorten the window");

  ModeSet out;
  out.modes.reserve(n_modes);
  if (rule == "midpoint") {
    for (int j = 0; j < n_modes; ++j) {
      const double w = (j + 0.5) * dw;
      out.modes.push_back({w, std::sqrt(spectral_density(k, w) * dw)});
    }
  } else if (rule == "gauss") {
    GaussLegendre gl(n_modes);
    const double mid = 0.5 * omega_max, half = 0.5 * omega_max;
    for (int j = 0; j < n_modes; ++j) {
      const double w = mid + half * gl.x[j];
      out.modes.push_back({w, std::sqrt(spectral_density(k, w) * half * gl.w[j])});
    }
    std::sort(out.modes.begin(), out.modes.end(),
              [](const Mode& a, const Mode& b) { return a.omega < b.omega; });
  } else {
    throw std::invalid_argument("discretize_bath: unknown rule '" + rule + "'");
  }

  out.report.delta_omega = dw;
  out.report.tail_mass = tail;
  out.report.recurrence_time = kTwoPi / dw;
  out.report.t_work = t_work;
  double worst = 0.0;
  const int samples = 800;
  for (int i = 0; i <= samples; ++i) {
    const double t = t_work * i / samples;
    worst = std::max(worst, std::abs(out.u_hat(t) - u_of_t(k, t)));
    if (t_work == 0.0) break;
  }
  out.report.max_kernel_error = worst;
  return out;
}

TruncatedSpace::TruncatedSpace(int modes_per_channel, int n_channels, int excitation_cap,
                               std::int64_t dim_budget)
    : mpc_(modes_per_channel), nch_(n_channels), pool_(modes_per_channel * n_channels),
      cap_(excitation_cap) {
  if (mpc_ < 1 || nch_ < 1) throw std::invalid_argument("TruncatedSpace: empty mode pool");
  if (cap_ < 0) throw std::invalid_argument("TruncatedSpace: excitation_cap must be nonnegative");
  if (cap_ > 8) throw std::invalid_argument("TruncatedSpace: excitation_cap above desk scale");
  offsets_.assign(1, 0);
  for (int k = 0; k <= cap_; ++k) offsets_.push_back(offsets_.back() + binom(pool_ + k - 1, k));
  if (dimension() > dim_budget)
    throw std::invalid_argument("TruncatedSpace: dimension " + std::to_string(dimension()) +
                                " exceeds budget " + std::to_string(dim_budget));
}

std::int64_t TruncatedSpace::rank(const std::vector<int>& multiset) const {
  const int k = static_cast<int>(multiset.size());
  if (k > cap_) throw std::invalid_argument("rank: multiset larger than the excitation cap");
  std::int64_t r = 0;
  for (int i = 0; i < k; ++i) {
    if (multiset[i] < 0 || multiset[i] >= pool_)
      throw std::invalid_argument("rank: mode index out of range");
    if (i > 0 && multiset[i] < multiset[i - 1])
      throw std::invalid_argument("rank: multiset must be ascending");
    r += binom(multiset[i] + i, i + 1);
  }
  return offsets_[k] + r;
}

std::vector<int> TruncatedSpace::unrank(std::int64_t photon_index) const {
  if (photon_index < 0 || photon_index >= photon_states())
    throw std::out_of_range("unrank: photon index out of range");
  int k = 0;
  while (offsets_[k + 1] <= photon_index) ++k;
  std::int64_t rem = photon_index - offsets_[k];
  std::vector<int> out(k);
  for (int i = k - 1; i >= 0; --i) {
    std::int64_t lo = i, hi = pool_ - 1 + i;
    while (lo < hi) {
      const std::int64_t mid = (lo + hi + 1) / 2;
      if (binom(mid, i + 1) <= rem) lo = mid;
      else hi = mid - 1;
    }
    out[i] = static_cast<int>(lo - i);
    rem -= binom(lo, i + 1);
  }
  return out;
}

FullHamiltonian FullHamiltonian::with_coupling(double g_new) const {
  if (!(g_new >= 0.0)) throw std::invalid_argument("with_coupling: g must be nonnegative");
  FullHamiltonian out = *this;
  out.g = g_new;
  return out;
}

Eigen::VectorXcd FullHamiltonian::apply(const Eigen::VectorXcd& psi) const {
  Eigen::VectorXcd out = diag.cast<std::complex<double>>().cwiseProduct(psi);
  if (g != 0.0 && interaction) out += g * (*interaction * psi);
  return out;
}

Eigen::SparseMatrix<std::complex<double>> FullHamiltonian::matrix() const {
  Eigen::SparseMatrix<std::complex<double>> out =
      interaction ? Eigen::SparseMatrix<std::complex<double>>(g * (*interaction))
                  : Eigen::SparseMatrix<std::complex<double>>(diag.size(), diag.size());
  Eigen::SparseMatrix<std::complex<double>> d(diag.size(), diag.size());
  d.setIdentity();
  for (std::int64_t i = 0; i < diag.size(); ++i) d.coeffRef(i, i) = diag(i);
  out += d;
  return out;
}

FullHamiltonian build_hamiltonian(const ModeSet& modes, double beta, double g,
                                  const TruncatedSpace& space) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("build_hamiltonian: beta must be positive");
  if (!(g >= 0.0) || !std::isfinite(g))
    throw std::invalid_argument("build_hamiltonian: g must be nonnegative");
  if (space.n_channels() != 3)
    throw std::invalid_argument("build_hamiltonian: the field has three polarization channels");
  const int per = space.modes_per_channel();
  if (static_cast<int>(modes.modes.size()) != per)
    throw std::invalid_argument("build_hamiltonian: mode list does not match the space");
  for (const Mode& m : modes.modes)
    if (!(m.omega > 0.0) || !(m.lambda >= 0.0))
      throw std::invalid_argument("build_hamiltonian: modes need omega > 0 and lambda >= 0");
  for (int c = 0; c < 3; ++c)
    if (modes.channel_pauli[c] < 1 || modes.channel_pauli[c] > 3)
      throw std::invalid_argument("build_hamiltonian: channel_pauli entries must be in {1,2,3}");

  FullHamiltonian h;
  h.g = g;
  h.beta = beta;
  h.npht = space.photon_states();
  h.diag.resize(space.dimension());

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::Triplet<std::complex<double>>> trip;
  trip.reserve(16 * static_cast<size_t>(space.photon_states()));
  std::vector<int> grown;
  for (std::int64_t p = 0; p < space.photon_states(); ++p) {
    const std::vector<int> occ = space.unrank(p);
    double e = 0.0;
    for (int alpha : occ) e += modes.modes[alpha % per].omega;
    h.diag(space.flat(p, 0)) = e + beta;
    h.diag(space.flat(p, 1)) = e - beta;
    if (static_cast<int>(occ.size()) >= space.excitation_cap()) continue;
    for (int alpha = 0; alpha < space.pool(); ++alpha) {
      const int c = alpha / per;
      if (!modes.channel_active[c]) continue;
      const double w = modes.modes[alpha % per].lambda * inv_sqrt2;
      if (w == 0.0) continue;
      grown = occ;
      grown.insert(std::upper_bound(grown.begin(), grown.end(), alpha), alpha);
      const double mult = static_cast<double>(std::count(occ.begin(), occ.end(), alpha));
      const double amp = w * std::sqrt(mult + 1.0);
      const std::int64_t q = space.rank(grown);
      const Mat2 sig = pauli(modes.channel_pauli[c]);
      for (int sp = 0; sp < 2; ++sp)
        for (int s = 0; s < 2; ++s) {
          const std::complex<double> v = amp * sig(sp, s);
          if (v == std::complex<double>(0.0, 0.0)) continue;
          trip.emplace_back(space.flat(q, sp), space.flat(p, s), v);
          trip.emplace_back(space.flat(p, s), space.flat(q, sp), std::conj(v));
        }
    }
  }
  auto inter = std::make_shared<Eigen::SparseMatrix<std::complex<double>>>(space.dimension(),
                                                                           space.dimension());
  inter->setFromTriplets(trip.begin(), trip.end());
  inter->makeCompressed();
  h.interaction = std::move(inter);
  return h;
}

Evolver::Evolver(const FullHamiltonian& h, EvolverSettings settings) : h_(h), set_(settings) {
  if (set_.krylov_m < 2) throw std::invalid_argument("Evolver: krylov_m must be >= 2");
  if (!(set_.grid_dt > 0.0)) throw std::invalid_argument("Evolver: grid_dt must be positive");
  if (h_.dimension() <= set_.dense_threshold) {
    dense_ = true;
    Eigen::MatrixXcd full(h_.matrix());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(full);
    if (es.info() != Eigen::Success) throw std::runtime_error("Evolver: dense eigensolve failed");
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
  }
}

Eigen::VectorXcd Evolver::krylov_step(const Eigen::VectorXcd& psi, double dt,
                                      double* residual) const {
  const double nrm = psi.norm();
  if (nrm == 0.0) {
    *residual = 0.0;
    return psi;
  }
  const int m = set_.krylov_m;
  const auto dim = psi.size();
  if (krylov_.rows() != dim || krylov_.cols() != m + 1) krylov_.resize(dim, m + 1);
  krylov_.col(0) = psi / nrm;
  Eigen::VectorXd alpha(m), beta(m);
  int used = m;
  bool happy = false;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXcd w = h_.apply(krylov_.col(j));
    if (j > 0) w -= beta(j - 1) * krylov_.col(j - 1);
    alpha(j) = krylov_.col(j).dot(w).real();
    w -= alpha(j) * krylov_.col(j);
    const auto basis = krylov_.leftCols(j + 1);
    const Eigen::VectorXcd proj = basis.adjoint() * w;
    w.noalias() -= basis * proj;
    beta(j) = w.norm();
    if (beta(j) < 1e-13 * (std::abs(alpha(j)) + 1.0)) {
      used = j + 1;
      happy = true;
      break;
    }
    krylov_.col(j + 1) = w / beta(j);
  }
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
  for (int j = 0; j < used; ++j) {
    t(j, j) = alpha(j);
    if (j + 1 < used) t(j, j + 1) = t(j + 1, j) = beta(j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  const Eigen::VectorXcd phases =
      (-kI * dt * es.eigenvalues().array()).exp().matrix();
  const Eigen::VectorXcd small =
      es.eigenvectors() *
      phases.cwiseProduct(es.eigenvectors().row(0).transpose().cast<std::complex<double>>());
  *residual = happy ? 0.0 : dt * beta(used - 1) * std::abs(small(used - 1));
  return nrm * (krylov_.leftCols(used) * small);
}

Eigen::VectorXcd Evolver::step(const Eigen::VectorXcd& psi, double dt, int depth) const {
  double res = 0.0;
  Eigen::VectorXcd out = krylov_step(psi, dt, &res);
  if (res <= set_.step_tol) {
    max_residual_ = std::max(max_residual_, res);
    return out;
  }
  if (depth >= 20)
    throw std::runtime_error("Evolver: krylov step did not converge; achieved residual " +
                             std::to_string(res) + " at dt=" + std::to_string(dt));
  return step(step(psi, 0.5 * dt, depth + 1), 0.5 * dt, depth + 1);
}

Eigen::VectorXcd Evolver::evolve(const Eigen::VectorXcd& psi, double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("evolve: t must be nonnegative");
  if (psi.size() != h_.dimension()) throw std::invalid_argument("evolve: state dimension mismatch");
  if (t == 0.0) return psi;
  Eigen::VectorXcd out;
  if (dense_) {
    Eigen::VectorXcd c = evecs_.adjoint() * psi;
    c = (-kI * t * evals_.array()).exp().matrix().cwiseProduct(c);
    out = evecs_ * c;
  } else {
    const int nsteps = static_cast<int>(std::ceil(t / set_.grid_dt));
    const double dt = t / nsteps;
    out = psi;
    for (int i = 0; i < nsteps; ++i) out = step(out, dt, 0);
  }
  if (std::abs(out.norm() - psi.norm()) > 1e-9 * std::max(1.0, psi.norm()))
    throw std::runtime_error("evolve: propagation broke unitarity beyond tolerance");
  return out;
}

Eigen::VectorXcd evolve_state(const FullHamiltonian& h, const Eigen::VectorXcd& psi, double t,
                              const EvolverSettings& settings) {
  if (std::abs(psi.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("evolve_state: state must be normalized");
  return Evolver(h, settings).evolve(psi, t);
}

ReducedDynamics::ReducedDynamics(const FullHamiltonian& h, EvolverSettings settings)
    : ev_(h, settings), npht_(h.npht) {
  if (h.npht <= 0 || 2 * h.npht != h.dimension())
    throw std::invalid_argument("ReducedDynamics: malformed Hamiltonian dimensions");
  for (int a = 0; a < 2; ++a) {
    psi_[a] = Eigen::VectorXcd::Zero(h.dimension());
    psi_[a](a) = 1.0;
  }
  refresh_kernels();
}

void ReducedDynamics::refresh_kernels() {
  using MapT = Eigen::Map<const Eigen::Matrix<std::complex<double>, 2, Eigen::Dynamic>>;
  for (int a = 0; a < 2; ++a) {
    MapT pa(psi_[a].data(), 2, npht_);
    for (int b = 0; b < 2; ++b) {
      MapT pb(psi_[b].data(), 2, npht_);
      k_[a][b] = pb * pa.adjoint();
    }
  }
}

void ReducedDynamics::advance(double t) {
  if (t < t_ - 1e-12) throw std::invalid_argument("advance: times must be non-decreasing");
  const double dt = t - t_;
  if (dt > 0.0) {
    for (int a = 0; a < 2; ++a) psi_[a] = ev_.evolve(psi_[a], dt);
    t_ = t;
    refresh_kernels();
  }
}

Mat2 ReducedDynamics::observe(const Mat2& sigma) const {
  Mat2 out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out(a, b) = (sigma * k_[a][b]).trace();
  return out;
}

Mat2 reduced_observable(const FullHamiltonian& h, const Mat2& sigma, double t,
                        const EvolverSettings& settings) {
  ReducedDynamics rd(h, settings);
  rd.advance(t);
  return rd.observe(sigma);
}

double sred_consistency(const FullHamiltonian& h, const Mat2& sigma, double t,
                        const EvolverSettings& settings) {
  if (!(t >= 0.0)) throw std::invalid_argument("sred_consistency: t must be nonnegative");
  const ExternalField field{0.0, 0.0, h.beta};
  const Mat2 rotated = free_evolve(-t, field, sigma);
  const Mat2 one_shot = reduced_observable(h, rotated, t, settings);

  ReducedDynamics rd(h, settings);
  rd.advance(0.5 * t);
  rd.advance(t);
  const Coeffs4 c = decompose(sigma);
  const double phase_m[4] = {0.0, 1.0, 0.0, -1.0};
  const Mat2 basis[4] = {Mat2::Identity(), ladder(1), ladder(0), ladder(-1)};
  Mat2 composed = Mat2::Zero();
  for (int j = 0; j < 4; ++j)
    composed += c(j) * std::exp(-2.0 * kI * phase_m[j] * h.beta * t) * rd.observe(basis[j]);
  return op_norm2(one_shot - composed);
}

ErrorCurve error_curve(const BathKernel& k, const Mat2& sigma, const std::vector<double>& g_list,
                       const std::vector<double>& times, const ErrorCurveConfig& cfg) {
  k.validate();
  if (times.empty()) throw std::invalid_argument("error_curve: empty time grid");
  if (times.front() < 0.0) throw std::invalid_argument("error_curve: times must be nonnegative");
  for (size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1])
      throw std::invalid_argument("error_curve: times must be strictly increasing");
  for (double g : g_list)
    if (!(g >= 0.0) || !std::isfinite(g))
      throw std::invalid_argument("error_curve: couplings must be nonnegative");

  const double t_work = times.back();
  ErrorCurve out;
  out.couplings = g_list;
  out.times = times;

  const ModeSet modes =
      discretize_bath(k, cfg.omega_max, cfg.n_modes, cfg.rule, t_work, cfg.guard_fraction,
                      cfg.tail_tol);
  out.discretization = modes.report;
  out.discretization_error = modes.report.max_kernel_error;
  const TruncatedSpace space(cfg.n_modes, 3, cfg.excitation_cap, cfg.dim_budget);
  const FullHamiltonian h_base = build_hamiltonian(modes, k.beta, 0.0, space);

  const DCoefficients d = d_coefficients(k);
  const Propagator prop(build_generator(d), ExternalField{0.0, 0.0, k.beta});

  std::vector<double> runs;
  runs.push_back(0.0);
  runs.insert(runs.end(), g_list.begin(), g_list.end());
  std::vector<std::vector<double>> run_traces(runs.size());
  std::vector<std::exception_ptr> errors(runs.size());

  auto worker_body = [&](size_t run) {
    const double g = runs[run];
    ReducedDynamics rd(h_base.with_coupling(g), cfg.evolver);
    std::vector<double> trace;
    trace.reserve(times.size());
    for (double t : times) {
      rd.advance(t);
      trace.push_back(op_norm2(rd.observe(sigma) - prop.approx_heisenberg(t, g, sigma)));
    }
    run_traces[run] = std::move(trace);
  };

  std::atomic<size_t> next{0};
  auto drain = [&] {
    for (size_t run = next.fetch_add(1); run < runs.size(); run = next.fetch_add(1)) {
      try {
        worker_body(run);
      } catch (...) {
        errors[run] = std::current_exception();
      }
    }
  };
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const size_t n_threads =
      std::min(runs.size(), static_cast<size_t>(cfg.threads > 0 ? cfg.threads : hw));
  if (n_threads <= 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    for (size_t i = 0; i < n_threads; ++i) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  out.zero_trace = run_traces[0];
  out.zero_coupling_error = *std::max_element(out.zero_trace.begin(), out.zero_trace.end());
  out.traces.assign(run_traces.begin() + 1, run_traces.end());
  for (const auto& tr : out.traces)
    out.sup_error.push_back(*std::max_element(tr.begin(), tr.end()));

  double g_min = 0.0;
  double e_min = 0.0;
  for (size_t i = 0; i < g_list.size(); ++i)
    if (g_list[i] > 0.0 && (g_min == 0.0 || g_list[i] < g_min)) {
      g_min = g_list[i];
      e_min = out.sup_error[i];
    }
  out.floor = out.zero_coupling_error +
              6.0 * g_min * g_min * t_work * out.discretization_error;
  const bool blind = !h_base.interaction || h_base.interaction->nonZeros() == 0;
  out.status = (g_min > 0.0 && !blind && out.floor <= 0.1 * e_min) ? "conclusive" : "inconclusive";
  return out;
}

}  // namespace qsr
