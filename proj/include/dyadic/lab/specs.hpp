#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "../io.hpp"
#include "../operators.hpp"
#include "../random.hpp"
#include "../weight_family.hpp"

namespace dyadic::lab {

enum class OperatorKind { Paraproduct, Shift, Multiplier };

/// Parsed operator spec string, not yet bound to a symbol b or weight w.
struct OperatorDescriptor {
  OperatorKind kind = OperatorKind::Shift;
  int m = 0;
  int n = 0;
  double t = 0.0;
  CoefficientFamily coeffs;
  std::string text;
};

/// "maximal" or "signs:seed=S".
inline CoefficientFamily parse_coefficients(std::string_view text) {
  if (text == "maximal") return MaximalCoefficients{};
  if (text.substr(0, 6) == "signs:" || text == "signs") {
    auto params = dyadic::detail::parse_params(text.size() > 6 ? text.substr(6) : std::string_view{}, "coefficients");
    RandomSignCoefficients c{0};
    if (auto s = dyadic::detail::take(params, "seed"))
      c.seed = static_cast<std::uint64_t>(dyadic::detail::parse_int(*s, "seed"));
    dyadic::detail::reject_leftovers(params, "coefficients");
    return c;
  }
  throw std::invalid_argument("unknown coefficient family '" + std::string(text) + "'");
}

/// "para:m=1,n=2,coeffs=maximal", "shift:m=0,n=1,coeffs=signs:seed=3", "tmult:t=0.5,m=1,n=1,coeffs=maximal".
inline OperatorDescriptor parse_operator_spec(std::string_view text) {
  const std::size_t colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view body = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  OperatorDescriptor d;
  d.text = std::string(text);
  if (kind == "para")
    d.kind = OperatorKind::Paraproduct;
  else if (kind == "shift")
    d.kind = OperatorKind::Shift;
  else if (kind == "tmult")
    d.kind = OperatorKind::Multiplier;
  else
    throw std::invalid_argument("unknown operator family '" + std::string(kind) + "'");

  // "coeffs=signs:seed=3" carries its own '=' and ':'; it is always the last item.
  std::string_view rest = body;
  std::string coeff_text = "maximal";
  if (const std::size_t at = rest.find("coeffs="); at != std::string_view::npos) {
    coeff_text = std::string(rest.substr(at + 7));
    rest = rest.substr(0, at);
    if (!rest.empty() && rest.back() == ',') rest.remove_suffix(1);
  }
  auto params = dyadic::detail::parse_params(rest, "operator spec");
  if (auto v = dyadic::detail::take(params, "m")) d.m = static_cast<int>(dyadic::detail::parse_int(*v, "m"));
  if (auto v = dyadic::detail::take(params, "n")) d.n = static_cast<int>(dyadic::detail::parse_int(*v, "n"));
  if (auto v = dyadic::detail::take(params, "t")) {
    if (d.kind != OperatorKind::Multiplier) throw std::invalid_argument("only tmult operators take t");
    d.t = dyadic::detail::parse_double(*v, "t");
  } else if (d.kind == OperatorKind::Multiplier) {
    d.t = 1.0;
  }
  dyadic::detail::reject_leftovers(params, "operator spec");
  if (d.m < 0 || d.n < 0) throw std::invalid_argument("complexity (m, n) must be nonnegative");
  d.coeffs = parse_coefficients(coeff_text);
  return d;
}

/// Attaches the symbol b (paraproducts) or the weight w (multipliers).
inline OperatorSpec bind(const OperatorDescriptor& d, const StepFunction& b, const Weight& w) {
  switch (d.kind) {
    case OperatorKind::Paraproduct:
      return {Paraproduct{b}, d.m, d.n, d.coeffs};
    case OperatorKind::Multiplier:
      return {HaarMultiplier{d.t, w}, d.m, d.n, d.coeffs};
    case OperatorKind::Shift:
      break;
  }
  return {HaarShift{}, d.m, d.n, d.coeffs};
}

/// Random symbol with Haar coefficients b_I = xi_I sqrt|I|, xi_I ~ U[-1, 1], mean zero.
inline StepFunction random_symbol(const DyadicGrid& grid, std::uint64_t seed) {
  UniformSource rng(mix64(seed) ^ 0x5bd1e995ULL);
  HaarSpectrum s = HaarSpectrum::zero(grid);
  for (std::size_t p = 1; p < s.coeffs.size(); ++p)
    s.coeffs[p] = rng.symmetric(1.0) * std::sqrt(IntervalId::from_heap(p).length());
  return inverse_haar_transform(s);
}

/// "random:seed=S", "const:c=V" or "file:PATH".
inline StepFunction parse_symbol_spec(std::string_view text, int depth) {
  const std::size_t colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view body = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (kind == "file") {
    StepFunction b = load_step_function(std::string(body));
    if (b.depth() != depth) throw std::invalid_argument("symbol file depth does not match --depth");
    return b;
  }
  auto params = dyadic::detail::parse_params(body, "symbol spec");
  if (kind == "random") {
    std::uint64_t seed = 1;
    if (auto s = dyadic::detail::take(params, "seed"))
      seed = static_cast<std::uint64_t>(dyadic::detail::parse_int(*s, "seed"));
    dyadic::detail::reject_leftovers(params, "symbol spec");
    return random_symbol(DyadicGrid(depth), seed);
  }
  if (kind == "const") {
    double c = 1.0;
    if (auto s = dyadic::detail::take(params, "c")) c = dyadic::detail::parse_double(*s, "c");
    dyadic::detail::reject_leftovers(params, "symbol spec");
    return StepFunction::constant(DyadicGrid(depth), c);
  }
  throw std::invalid_argument("unknown symbol family '" + std::string(kind) + "'");
}

/// Short family label used to group rows for regression: "cascade", "power" or "file".
inline std::string weight_family_label(const WeightFamilySpec& spec) {
  if (std::holds_alternative<CascadeSpec>(spec)) return "cascade";
  if (std::holds_alternative<PowerSpec>(spec)) return "power";
  return "file";
}

/// Canonical text of a spec, so ids in output tables do not depend on how the user spelled them.
inline std::string canonical(const WeightFamilySpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using S = std::decay_t<decltype(s)>;
        char buf[160];
        if constexpr (std::is_same_v<S, CascadeSpec>) {
          std::snprintf(buf, sizeof buf, "cascade:depth=%d,delta=%.17g,seed=%llu", s.depth, s.delta,
                        static_cast<unsigned long long>(s.seed));
          return buf;
        } else if constexpr (std::is_same_v<S, PowerSpec>) {
          std::snprintf(buf, sizeof buf, "power:depth=%d,a=%.17g,x0=%.17g", s.depth, s.exponent, s.center);
          return buf;
        } else {
          return "file:" + s.path;
        }
      },
      spec);
}

}  // namespace dyadic::lab
