#include "mns/functionals.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "mns/random_fields.hpp"

namespace mns {

namespace {

void require_positive_rho(const ScalarField& rho, const char* who) {
  const auto d = rho.data();
  for (std::size_t n = 0; n < d.size(); ++n)
    if (!(d[n] > 0.0))
      throw NumericalError(std::string(who) + ": nonpositive density at node " +
                           std::to_string(n));
}

void validate_profile(const EntropyProfile& p) {
  const double h = 1e-6;
  for (double s : {-1.5, -0.7, 0.0, 0.4, 1.2}) {
    const double fd = (p.f(s + h) - p.f(s - h)) / (2.0 * h);
    const double fp = p.f_prime(s);
    if (std::abs(fd - fp) > 1e-5 * std::max(1.0, std::abs(fp)))
      throw std::invalid_argument(
          "entropy profile: f_prime is not the derivative of f");
  }
}

}  // namespace

EntropyProfile EntropyProfile::linear(double slope) {
  EntropyProfile p;
  p.f = [slope](double s) { return slope * s; };
  p.f_prime = [slope](double) { return slope; };
  p.description = "linear " + std::to_string(slope) + "*s";
  validate_profile(p);
  return p;
}

EntropyProfile EntropyProfile::polynomial(const std::vector<double>& coeffs) {
  if (coeffs.empty() || coeffs.size() > 5)
    throw std::invalid_argument("entropy profile: polynomial degree <= 4");
  EntropyProfile p;
  p.f = [coeffs](double s) {
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) v = v * s + coeffs[i];
    return v;
  };
  p.f_prime = [coeffs](double s) {
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 1;) v = v * s + i * coeffs[i];
    return v;
  };
  p.description = "polynomial";
  validate_profile(p);
  return p;
}

EntropyProfile EntropyProfile::custom(std::function<double(double)> f,
                                      std::function<double(double)> f_prime,
                                      std::string description) {
  EntropyProfile p{std::move(f), std::move(f_prime), std::move(description)};
  validate_profile(p);
  return p;
}

Functional hamiltonian(const EquationOfState& eos) {
  Functional F;
  F.label = "hamiltonian";
  F.value = [eos](const FluidState& st) {
    require_positive_rho(st.rho, "hamiltonian");
    const ScalarField e = combine(
        [&eos](double r, double sv, double vx, double vy, double vz) {
          const double vv = vx * vx + vy * vy + vz * vz;
          return 0.5 * r * vv + r * eos.internal_energy(r, sv);
        },
        st.rho, st.s, st.v[0], st.v[1], st.v[2]);
    return integrate(e);
  };
  F.derivative = [eos](const FluidState& st) {
    require_positive_rho(st.rho, "hamiltonian");
    FunctionalDerivative d;
    d.v = VectorField(st.grid());
    for (int a = 0; a < 3; ++a)
      d.v[a] = combine([](double r, double vc) { return r * vc; }, st.rho,
                       st.v[a]);
    d.rho = combine(
        [&eos](double r, double sv, double vx, double vy, double vz) {
          const double vv = vx * vx + vy * vy + vz * vz;
          const double u = eos.internal_energy(r, sv);
          return 0.5 * vv + u + (eos.gamma - 1.0) * u;  // U + p/rho
        },
        st.rho, st.s, st.v[0], st.v[1], st.v[2]);
    d.s = combine(
        [&eos](double r, double sv) { return r * eos.temperature(r, sv); },
        st.rho, st.s);
    return d;
  };
  return F;
}

Functional mass() {
  Functional F;
  F.label = "mass";
  F.value = [](const FluidState& st) { return integrate(st.rho); };
  F.derivative = [](const FluidState& st) {
    FunctionalDerivative d;
    d.v = VectorField(st.grid());
    d.rho = ScalarField(st.grid(), 1.0);
    d.s = ScalarField(st.grid());
    return d;
  };
  return F;
}

Functional momentum(int j) {
  Functional F;
  F.label = "momentum_" + std::string(1, char('x' + j));
  F.value = [j](const FluidState& st) { return inner(st.rho, st.v[j]); };
  F.derivative = [j](const FluidState& st) {
    FunctionalDerivative d;
    d.v = VectorField(st.grid());
    d.v[j] = st.rho;
    d.rho = st.v[j];
    d.s = ScalarField(st.grid());
    return d;
  };
  return F;
}

std::array<Functional, 3> momentum() {
  return {momentum(0), momentum(1), momentum(2)};
}

Functional generalized_entropy(const EntropyProfile& profile) {
  Functional F;
  F.label = "entropy[" + profile.description + "]";
  F.value = [profile](const FluidState& st) {
    return integrate(combine(
        [&profile](double r, double sv) { return r * profile.f(sv); }, st.rho,
        st.s));
  };
  F.derivative = [profile](const FluidState& st) {
    FunctionalDerivative d;
    d.v = VectorField(st.grid());
    d.rho = combine([&profile](double sv) { return profile.f(sv); }, st.s);
    d.s = combine(
        [&profile](double r, double sv) { return r * profile.f_prime(sv); },
        st.rho, st.s);
    return d;
  };
  return F;
}

Functional free_energy(const EquationOfState& eos,
                       const EntropyProfile& profile) {
  Functional F =
      linear_combination(1.0, hamiltonian(eos), 1.0,
                         generalized_entropy(profile));
  F.label = "free_energy[" + profile.description + "]";
  return F;
}

Functional linear_combination(double a, const Functional& F, double b,
                              const Functional& G) {
  Functional H;
  H.label = F.label + "+" + G.label;
  H.value = [a, F, b, G](const FluidState& st) {
    return a * F.value(st) + b * G.value(st);
  };
  H.derivative = [a, F, b, G](const FluidState& st) {
    const FunctionalDerivative dF = F.derivative(st);
    const FunctionalDerivative dG = G.derivative(st);
    auto fma = [a, b](double x, double y) { return a * x + b * y; };
    FunctionalDerivative d;
    d.v = VectorField(st.grid());
    for (int c = 0; c < 3; ++c) d.v[c] = combine(fma, dF.v[c], dG.v[c]);
    d.rho = combine(fma, dF.rho, dG.rho);
    d.s = combine(fma, dF.s, dG.s);
    return d;
  };
  return H;
}

// ---- random test functionals ------------------------------------------------

namespace {

// Field slots a term factor can reference.
enum class Slot { v0, v1, v2, rho, s };

struct Factor {
  Slot slot;
  int diff_axis = -1;  // -1: pointwise value
};

struct Term {
  SmoothFn coeff;
  Factor a;
  Factor b;
  bool quadratic = false;
};

const ScalarField& slot_field(const FluidState& st, Slot s) {
  switch (s) {
    case Slot::v0: return st.v[0];
    case Slot::v1: return st.v[1];
    case Slot::v2: return st.v[2];
    case Slot::rho: return st.rho;
    default: return st.s;
  }
}

ScalarField& slot_deriv(FunctionalDerivative& d, Slot s) {
  switch (s) {
    case Slot::v0: return d.v[0];
    case Slot::v1: return d.v[1];
    case Slot::v2: return d.v[2];
    case Slot::rho: return d.rho;
    default: return d.s;
  }
}

ScalarField factor_field(const FluidState& st, const Factor& f) {
  const ScalarField& base = slot_field(st, f.slot);
  if (f.diff_axis < 0) return base;
  return diff_or_zero(base, f.diff_axis);
}

Factor draw_factor(RandomStream& rng) {
  Factor f;
  f.slot = Slot(rng.uniform_int(5));
  if (rng.uniform_int(2) == 0) f.diff_axis = rng.uniform_int(3);
  return f;
}

}  // namespace

Functional random_test_functional(std::uint64_t seed) {
  // All draws happen up front and never touch a grid, so the same seed names
  // the same continuum functional at every resolution.
  RandomStream rng(seed);
  const int n_terms = 8 + rng.uniform_int(5);
  std::vector<Term> terms;
  terms.reserve(n_terms);
  for (int t = 0; t < n_terms; ++t) {
    Term term;
    // Wavenumber-1 coefficient fields keep refinement sweeps over the same
    // functional family well inside the asymptotic range from N = 8 up.
    term.coeff = random_smooth_fn(rng, 3, rng.uniform(0.3, 1.0), 1);
    term.coeff.offset = rng.uniform(-0.5, 0.5);
    term.quadratic = rng.uniform_int(4) != 0;
    term.a = draw_factor(rng);
    term.b = term.quadratic ? draw_factor(rng) : Factor{Slot::rho, -1};
    terms.push_back(std::move(term));
  }

  Functional F;
  F.label = "random[" + std::to_string(seed) + "]";
  F.value = [terms](const FluidState& st) {
    ScalarField integrand(st.grid());
    for (const Term& t : terms) {
      const ScalarField c = t.coeff.sample(st.grid());
      const ScalarField fa = factor_field(st, t.a);
      if (t.quadratic) {
        const ScalarField fb = factor_field(st, t.b);
        integrand += combine(
            [](double cv, double av, double bv) { return cv * av * bv; }, c,
            fa, fb);
      } else {
        integrand += c * fa;
      }
    }
    return integrate(integrand);
  };
  F.derivative = [terms](const FluidState& st) {
    FunctionalDerivative d;
    d.v = VectorField(st.grid());
    d.rho = ScalarField(st.grid());
    d.s = ScalarField(st.grid());
    auto add_contribution = [&](const Factor& f, const ScalarField& weight) {
      // weight = d(term integrand)/d(factor value); the exact node gradient
      // of a differenced factor is minus the difference of the weight.
      ScalarField& target = slot_deriv(d, f.slot);
      if (f.diff_axis < 0)
        target += weight;
      else
        target -= diff_or_zero(weight, f.diff_axis);
    };
    for (const Term& t : terms) {
      const ScalarField c = t.coeff.sample(st.grid());
      if (t.quadratic) {
        const ScalarField fa = factor_field(st, t.a);
        const ScalarField fb = factor_field(st, t.b);
        add_contribution(t.a, c * fb);
        add_contribution(t.b, c * fa);
      } else {
        add_contribution(t.a, c);
      }
    }
    return d;
  };
  return F;
}

double pair(const FunctionalDerivative& d, const Tendency& t) {
  const ScalarField integrand = combine(
      [](double dv0, double tv0, double dv1, double tv1, double dv2,
         double tv2, double dr, double tr, double ds, double ts) {
        return dv0 * tv0 + dv1 * tv1 + dv2 * tv2 + dr * tr + ds * ts;
      },
      d.v[0], t.v[0], d.v[1], t.v[1], d.v[2], t.v[2], d.rho, t.rho, d.s, t.s);
  return integrate(integrand);
}

}  // namespace mns
