#include "specorder/hamiltonian.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "specorder/errors.hpp"

namespace specorder::ham {
namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << what << " must be positive and finite, got " << value;
    throw ValidationError(msg.str());
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

double KineticSpec::operator()(double p2) const {
  return std::visit(overloaded{
                        [&](const NonRel& k) { return p2 / (2.0 * k.mu); },
                        [&](const NonRelTwoBody& k) { return 2.0 * k.m + p2 / k.m; },
                        [&](const Salpeter& k) { return 2.0 * std::sqrt(p2 + k.m * k.m); },
                        [&](const CustomKinetic& k) { return k.f(p2); },
                    },
                    v_);
}

std::string KineticSpec::describe() const {
  return std::visit(overloaded{
                        [](const NonRel& k) { return "nonrel(mu=" + fmt(k.mu) + ")"; },
                        [](const NonRelTwoBody& k) { return "nonrel_two_body(m=" + fmt(k.m) + ")"; },
                        [](const Salpeter& k) { return "salpeter(m=" + fmt(k.m) + ")"; },
                        [](const CustomKinetic& k) { return k.label; },
                    },
                    v_);
}

void KineticSpec::validate() const {
  std::visit(overloaded{
                 [](const NonRel& k) { require_positive(k.mu, "nonrel: mu"); },
                 [](const NonRelTwoBody& k) { require_positive(k.m, "nonrel_two_body: m"); },
                 [](const Salpeter& k) {
                   if (!(k.m >= 0.0) || !std::isfinite(k.m))
                     throw ValidationError("salpeter: m must be >= 0 and finite, got " + fmt(k.m));
                 },
                 [](const CustomKinetic& k) {
                   if (!k.f) throw ValidationError("custom kinetic '" + k.label + "' has no function");
                 },
             },
             v_);
}

bool KineticSpec::ultrarelativistic() const noexcept {
  const auto* s = std::get_if<Salpeter>(&v_);
  return s != nullptr && s->m == 0.0;
}

double PotentialSpec::operator()(double r) const {
  return std::visit(overloaded{
                        [&](const Coulomb& p) { return -p.kappa / r; },
                        [&](const Harmonic& p) { return p.lambda * r * r; },
                        [&](const TangentHarmonic& p) {
                          return p.kappa / (2.0 * p.r0 * p.r0 * p.r0) * r * r - 1.5 * p.kappa / p.r0;
                        },
                        [&](const PowerSum& p) {
                          double s = 0.0;
                          for (const auto& term : p.terms) s += term.coupling * std::pow(r, term.exponent);
                          return s;
                        },
                        [&](const CustomPotential& p) { return p.v(r); },
                        [&](const Scaled& p) { return p.g * (*p.inner)(r); },
                    },
                    v_);
}

std::string PotentialSpec::describe() const {
  return std::visit(overloaded{
                        [](const Coulomb& p) { return "coulomb(kappa=" + fmt(p.kappa) + ")"; },
                        [](const Harmonic& p) { return "harmonic(lambda=" + fmt(p.lambda) + ")"; },
                        [](const TangentHarmonic& p) {
                          return "tangent_harmonic(kappa=" + fmt(p.kappa) + ",r0=" + fmt(p.r0) + ")";
                        },
                        [](const PowerSum& p) {
                          std::string s = "power_sum(";
                          for (std::size_t i = 0; i < p.terms.size(); ++i) {
                            if (i) s += ",";
                            s += fmt(p.terms[i].coupling) + "*r^" + fmt(p.terms[i].exponent);
                          }
                          return s + ")";
                        },
                        [](const CustomPotential& p) { return p.label; },
                        [](const Scaled& p) { return fmt(p.g) + "*" + p.inner->describe(); },
                    },
                    v_);
}

void PotentialSpec::validate() const {
  std::visit(overloaded{
                 [](const Coulomb& p) { require_positive(p.kappa, "coulomb: kappa"); },
                 [](const Harmonic& p) { require_positive(p.lambda, "harmonic: lambda"); },
                 [](const TangentHarmonic& p) {
                   require_positive(p.kappa, "tangent_harmonic: kappa");
                   require_positive(p.r0, "tangent_harmonic: r0");
                 },
                 [](const PowerSum& p) {
                   if (p.terms.empty()) throw ValidationError("power_sum: needs at least one term");
                   for (const auto& t : p.terms)
                     if (!std::isfinite(t.coupling) || !std::isfinite(t.exponent))
                       throw ValidationError("power_sum: coupling and exponent must be finite");
                 },
                 [](const CustomPotential& p) {
                   if (!p.v) throw ValidationError("custom potential '" + p.label + "' has no function");
                 },
                 [](const Scaled& p) {
                   if (!std::isfinite(p.g)) throw ValidationError("scaled: g must be finite");
                   if (!p.inner) throw ValidationError("scaled: missing inner potential");
                   p.inner->validate();
                 },
             },
             v_);
}

Scaled scaled(double g, PotentialSpec inner) {
  return Scaled{g, std::make_shared<const PotentialSpec>(std::move(inner))};
}

namespace {

void expand_into(const PotentialSpec& v, double factor, PotentialTerms& out) {
  std::visit(overloaded{
                 [&](const Coulomb& p) { out.powers.push_back({-factor * p.kappa, -1.0}); },
                 [&](const Harmonic& p) { out.powers.push_back({factor * p.lambda, 2.0}); },
                 [&](const TangentHarmonic& p) {
                   out.powers.push_back({factor * p.kappa / (2.0 * p.r0 * p.r0 * p.r0), 2.0});
                   out.powers.push_back({-factor * 1.5 * p.kappa / p.r0, 0.0});
                 },
                 [&](const PowerSum& p) {
                   for (const auto& t : p.terms) out.powers.push_back({factor * t.coupling, t.exponent});
                 },
                 [&](const CustomPotential& p) { out.customs.emplace_back(factor, &p); },
                 [&](const Scaled& p) { expand_into(*p.inner, factor * p.g, out); },
             },
             v.variant());
}

}  // namespace

PotentialTerms expand(const PotentialSpec& v) {
  PotentialTerms out;
  expand_into(v, 1.0, out);
  return out;
}

SymMatrix kinetic_matrix(const KineticSpec& t, const BasisSpec& basis, Execution exec) {
  t.validate();
  basis.validate();
  return std::visit(overloaded{
                        [&](const NonRel& k) { return (1.0 / (2.0 * k.mu)) * basis::p2_matrix(basis); },
                        [&](const NonRelTwoBody& k) {
                          auto m = (1.0 / k.m) * basis::p2_matrix(basis);
                          m.add_to_diagonal(2.0 * k.m);
                          return m;
                        },
                        [&](const Salpeter& k) {
                          if (k.m == 0.0) return 2.0 * basis::momentum_power_matrix(basis, 1.0, exec);
                          const double m2 = k.m * k.m;
                          return basis::kinetic_matrix(
                              basis, [m2](double p2) { return 2.0 * std::sqrt(p2 + m2); }, {}, exec);
                        },
                        [&](const CustomKinetic& k) {
                          const basis::MeshOptions mesh{.extra_nodes = std::nullopt, .leading_power = k.leading_power};
                          return basis::kinetic_matrix(basis, k.f, mesh, exec);
                        },
                    },
                    t.variant());
}

SymMatrix potential_matrix(const PotentialSpec& v, const BasisSpec& basis, Execution exec) {
  v.validate();
  basis.validate();
  const auto terms = expand(v);
  SymMatrix out(basis.size);
  for (const auto& term : terms.powers) {
    if (term.coupling == 0.0) continue;
    out += term.coupling * basis::power_matrix(basis, term.exponent, exec);
  }
  for (const auto& [coef, custom] : terms.customs) {
    if (coef == 0.0) continue;
    const basis::MeshOptions mesh{.extra_nodes = std::nullopt, .leading_power = custom->leading_power};
    out += coef * basis::potential_matrix(basis, custom->v, mesh, exec);
  }
  return out;
}

SymMatrix assemble(const KineticSpec& t, const PotentialSpec& v, const BasisSpec& basis, Execution exec) {
  auto h = kinetic_matrix(t, basis, exec);
  h += potential_matrix(v, basis, exec);
  for (double x : h.data())
    if (!std::isfinite(x)) {
      std::ostringstream msg;
      msg << "assembled Hamiltonian has non-finite entries (l=" << basis.l << ", N=" << basis.size
          << ", b=" << basis.b << ")";
      throw NumericError(msg.str());
    }
  return h;
}

std::vector<Level> solve_levels(const KineticSpec& t, const PotentialSpec& v, const BasisSpec& basis,
                                std::size_t count, Execution exec) {
  basis.validate();
  if (count == 0 || count > basis.size) {
    std::ostringstream msg;
    msg << "solve_levels: level count " << count << " must be in [1, " << basis.size << "]";
    throw ValidationError(msg.str());
  }
  const auto ev = linalg::eigvalsh(assemble(t, v, basis, exec));
  std::vector<Level> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) out.push_back({static_cast<int>(n), basis.l, ev[n]});
  return out;
}

ScaleResult optimize_basis_scale(const KineticSpec& t, const PotentialSpec& v, const BasisSpec& basis_template,
                                 std::size_t target, const ScaleSearch& search, Execution exec) {
  t.validate();
  v.validate();
  basis_template.validate();
  if (target >= basis_template.size) {
    std::ostringstream msg;
    msg << "optimize_basis_scale: target level " << target << " outside basis of size " << basis_template.size;
    throw ValidationError(msg.str());
  }
  if (!(search.b_lo > 0.0) || !(search.b_hi > search.b_lo) || search.scan_points < 3 || search.iterations < 0)
    throw ValidationError("optimize_basis_scale: invalid search bracket");

  auto energy_at = [&](double log_b, Execution inner) {
    BasisSpec b = basis_template;
    b.b = std::exp(log_b);
    return linalg::eigvalsh(assemble(t, v, b, inner))[target];
  };

  const double x_lo = std::log(search.b_lo);
  const double x_hi = std::log(search.b_hi);
  const int points = search.scan_points;
  std::vector<double> xs(points), es(points);
  std::vector<std::exception_ptr> errors(points);
  for (int i = 0; i < points; ++i) xs[i] = x_lo + (x_hi - x_lo) * i / (points - 1);

  // Scan probes are independent; each slot is written by one iteration.
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < points; ++i) {
      try {
        es[i] = energy_at(xs[i], Execution::serial);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    for (int i = 0; i < points; ++i) es[i] = energy_at(xs[i], Execution::serial);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ScaleResult result;
  result.evaluations = points;
  int k = 0;
  for (int i = 1; i < points; ++i)
    if (es[i] < es[k]) k = i;
  double best_x = xs[k];
  double best_e = es[k];

  auto probe = [&](double x) {
    const double e = energy_at(x, exec);
    ++result.evaluations;
    if (e < best_e) {
      best_e = e;
      best_x = x;
    }
    return e;
  };

  double a = xs[std::max(k - 1, 0)];
  double c_hi = xs[std::min(k + 1, points - 1)];
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = c_hi - inv_phi * (c_hi - a);
  double d = a + inv_phi * (c_hi - a);
  double fc = probe(c);
  double fd = probe(d);
  for (int it = 0; it < search.iterations; ++it) {
    if (fc < fd) {
      c_hi = d;
      d = c;
      fd = fc;
      c = c_hi - inv_phi * (c_hi - a);
      fc = probe(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (c_hi - a);
      fd = probe(d);
    }
  }

  result.b = std::exp(best_x);
  result.energy = best_e;
  const double edge_tol = 1e-6 * (x_hi - x_lo);
  if (k == 0 || k == points - 1 || best_x - x_lo < edge_tol || x_hi - best_x < edge_tol) {
    result.bracketed = false;
    std::ostringstream msg;
    msg << "minimum not bracketed: eigenvalue " << target << " still decreasing at b=" << result.b;
    result.warning = msg.str();
  }
  return result;
}

std::vector<OptimizedLevel> solve_levels_optimized(const KineticSpec& t, const PotentialSpec& v,
                                                   const BasisSpec& basis_template, std::size_t count,
                                                   const ScaleSearch& search, Execution exec) {
  if (count == 0 || count > basis_template.size)
    throw ValidationError("solve_levels_optimized: level count must be in [1, basis size]");
  std::vector<OptimizedLevel> out;
  for (std::size_t n = 0; n < count; ++n) {
    const auto r = optimize_basis_scale(t, v, basis_template, n, search, exec);
    out.push_back({{static_cast<int>(n), basis_template.l, r.energy}, r.b, r.bracketed});
  }
  return out;
}

}  // namespace specorder::ham
