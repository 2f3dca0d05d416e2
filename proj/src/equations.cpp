#include "cliffcalc/equations.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <map>

#include "cliffcalc/error.hpp"
#include "cliffcalc/resolvents.hpp"

namespace cliffcalc {

namespace {

using cplx = std::complex<double>;

template <class First, class... Rest>
auto prod(const First& first, const Rest&... rest) {
  if constexpr (sizeof...(rest) == 0) {
    return first;
  } else {
    return (first * ... * rest);
  }
}

double binomial(unsigned m, unsigned k) {
  double out = 1.0;
  for (unsigned j = 1; j <= k; ++j) out = out * (m - k + j) / j;
  return out;
}

cplx two_point_kernel(const SlicePoint& s, const SlicePoint& p) {
  const cplx z = p.to_complex();
  const cplx base = z * z - 2.0 * s.u * z + s.modulus_squared();
  if (std::abs(base) <= 1e-10 * std::max(1.0, p.modulus_squared() + s.modulus_squared())) {
    throw Error(ErrorCode::same_sphere, "p lies on the sphere [s]");
  }
  return 1.0 / base;
}

void check_same_slice(const SlicePoint& s, const SlicePoint& p) {
  if (s.unit.components() != p.unit.components()) {
    throw Error(ErrorCode::not_in_slice, "s and p must lie on the same slice");
  }
}

void check_applies(EquationId id, unsigned n) {
  switch (id) {
    case EquationId::s_eq: return;
    case EquationId::f3:
    case EquationId::f5_pseudo:
    case EquationId::f5_full:
    case EquationId::f7_pseudo:
    case EquationId::f7_full: {
      const unsigned want = id == EquationId::f3 ? 3 : (id == EquationId::f5_pseudo || id == EquationId::f5_full) ? 5 : 7;
      if (n != want) {
        throw Error(ErrorCode::dimension_mismatch,
                    std::string(to_string(id)) + " needs n=" + std::to_string(want) + ", got " + std::to_string(n));
      }
      return;
    }
    case EquationId::gen_pseudo:
    case EquationId::pseudo_f_h_odd:
    case EquationId::pseudo_f_h_even:
      if (n % 2 == 0 || n <= 3) {
        throw Error(ErrorCode::odd_dimension, "needs odd n > 3, got " + std::to_string(n));
      }
      if (id == EquationId::pseudo_f_h_odd && ((n - 1) / 2) % 2 == 0) {
        throw Error(ErrorCode::h_parity_mismatch, "h = " + std::to_string((n - 1) / 2) + " is even");
      }
      if (id == EquationId::pseudo_f_h_even && ((n - 1) / 2) % 2 == 1) {
        throw Error(ErrorCode::h_parity_mismatch, "h = " + std::to_string((n - 1) / 2) + " is odd");
      }
      return;
  }
}

// Every operator and scalar the identities are built from, at one (s, p, T).
class Context {
public:
  Context(const CommutingTuple& t, const SlicePoint& s, const SlicePoint& p)
      : n(t.n()), d(t.d()), s_pt(s), p_pt(p) {
    check_same_slice(s, p);
    if (s.unit.n() != n) throw Error(ErrorCode::dimension_mismatch, "slice unit does not match the tuple");
    kernel = two_point_kernel(s, p);
    qs_slice = pseudo_resolvent_slice(s, t);
    qp_slice = pseudo_resolvent_slice(p, t);
    s_num = slice_embed(s);
    p_num = slice_embed(p);
    sbar = slice_embed(s.conjugate());
    id = CliffordOperator::identity(n, d);
    top = t.as_operator();
    tbar = op_conjugate(t);
    mod = tbar * top;
    t0 = CliffordOperator::from_blade_matrix(n, BladeIndex{0}, t.component(0));
    t_plus_tbar = top + tbar;
    s_minus_tbar = CliffordOperator::from_number(s_num, d) - tbar;
    p_minus_tbar = CliffordOperator::from_number(p_num, d) - tbar;
    sr = qs(1) * s_minus_tbar;
    sl = p_minus_tbar * qp(1);
  }

  void set_f(unsigned order) {
    h = sce_exponent(order);
    g = gamma(order).as_double();
    f = g * (qs(h + 1) * s_minus_tbar);
    gl = g * (p_minus_tbar * qp(h + 1));
  }

  const CliffordOperator& qs(unsigned k) { return power(qs_cache, qs_slice, k); }
  const CliffordOperator& qp(unsigned k) { return power(qp_cache, qp_slice, k); }
  CliffordNumber sp(unsigned k) const { return number_power(s_pt, k); }
  CliffordNumber pp(unsigned k) const { return number_power(p_pt, k); }
  const CliffordOperator& tpow(unsigned k) { return op_power(t_cache, top, k); }
  const CliffordOperator& tbpow(unsigned k) { return op_power(tb_cache, tbar, k); }

  CliffordOperator rhs(const CliffordOperator& a, const CliffordOperator& b) const {
    const CliffordOperator diff = a - b;
    return (diff * p_num - sbar * diff) * slice_embed(kernel, s_pt.unit);
  }

  unsigned n;
  std::size_t d;
  SlicePoint s_pt, p_pt;
  cplx kernel;
  SliceComplexOperator qs_slice, qp_slice;
  CliffordNumber s_num, p_num, sbar;
  CliffordOperator id, top, tbar, mod, t0, t_plus_tbar, s_minus_tbar, p_minus_tbar, sr, sl;
  unsigned h = 0;
  double g = 0.0;
  CliffordOperator f, gl;

private:
  const CliffordOperator& power(std::map<unsigned, CliffordOperator>& cache, const SliceComplexOperator& base,
                                unsigned k) {
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, slice_complex_pow(base, k).to_operator()).first;
    return it->second;
  }

  const CliffordOperator& op_power(std::map<unsigned, CliffordOperator>& cache, const CliffordOperator& base,
                                   unsigned k) {
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, cm_pow(base, k)).first;
    return it->second;
  }

  static CliffordNumber number_power(const SlicePoint& x, unsigned k) {
    return slice_embed(std::pow(x.to_complex(), static_cast<int>(k)), x.unit);
  }

  std::map<unsigned, CliffordOperator> qs_cache, qp_cache, t_cache, tb_cache;
};

class Builder {
public:
  explicit Builder(std::vector<Term>& terms) : terms_(terms) {}
  void add(std::string label, std::string group, double coef, CliffordOperator value, int multiplicity = 1) {
    terms_.push_back(Term{std::move(label), std::move(group), coef, multiplicity, std::move(value)});
  }

private:
  std::vector<Term>& terms_;
};

void add_leading(Builder& b, Context& c) {
  b.add("F^R(s) S_L(p)", "lead", 1.0, c.f * c.sl);
  b.add("S_R(s) F^L(p)", "lead", 1.0, c.sr * c.gl);
}

void build_f3(Builder& b, Context& c) {
  add_leading(b, c);
  const double k = 1.0 / c.g;  // -1/4
  const auto& F = c.f;
  const auto& G = c.gl;
  const auto& T = c.top;
  b.add("s F G p", "quarter", k, prod(c.s_num, F, G, c.p_num));
  b.add("s F T G", "quarter", -k, prod(c.s_num, F, T, G));
  b.add("F T G p", "quarter", -k, prod(F, T, G, c.p_num));
  b.add("F T^2 G", "quarter", k, prod(F, c.tpow(2), G));
}

// gamma [sum_{i=0}^{h-2} Q_s^{h-i-1} S_R S_L Q_p^{i+1} + sum_{i=0}^{h-1} Q_s^{h-i} Q_p^{i+1}]
void build_general_pseudo(Builder& b, Context& c) {
  add_leading(b, c);
  const unsigned h = c.h;
  for (unsigned i = 0; i + 2 <= h; ++i) {
    b.add("Q_s^" + std::to_string(h - i - 1) + " S_R S_L Q_p^" + std::to_string(i + 1), "gamma", c.g,
          prod(c.qs(h - i - 1), c.sr, c.sl, c.qp(i + 1)));
  }
  for (unsigned i = 0; i < h; ++i) {
    b.add("Q_s^" + std::to_string(h - i) + " Q_p^" + std::to_string(i + 1), "gamma", c.g,
          prod(c.qs(h - i), c.qp(i + 1)));
  }
}

void build_f5_full(Builder& b, Context& c) {
  add_leading(b, c);
  const double k = 1.0 / c.g;
  const auto& F = c.f;
  const auto& G = c.gl;
  const auto& T = c.top;
  const auto& Tb = c.tbar;
  const auto& M = c.mod;
  const auto s1 = c.sp(1), s2 = c.sp(2), s3 = c.sp(3);
  const auto p1 = c.pp(1), p2 = c.pp(2), p3 = c.pp(3);
  const auto& T2 = c.tpow(2);
  const auto& T3 = c.tpow(3);
  const auto& Tb2 = c.tbpow(2);
  const std::string grp = "gamma_inv";
  b.add("s^2 F G p^2", grp, k, prod(s2, F, G, p2));
  b.add("s^2 F T G p", grp, -3 * k, prod(s2, F, T, G, p1), 3);
  b.add("s F T G p^2", grp, -3 * k, prod(s1, F, T, G, p2), 3);
  b.add("s F T^2 G p", grp, 3 * k, prod(s1, F, T2, G, p1), 3);
  b.add("s F |T|^2 T G", grp, -4 * k, prod(s1, F, M, T, G), 4);
  b.add("s F |T|^2 G p", grp, 6 * k, prod(s1, F, M, G, p1), 6);
  b.add("F |T|^2 T G p", grp, -4 * k, prod(F, M, T, G, p1), 4);
  b.add("s F Tbar^2 G p", grp, k, prod(s1, F, Tb2, G, p1));
  b.add("s F |T|^2 Tbar G", grp, -k, prod(s1, F, M, Tb, G));
  b.add("F |T|^2 Tbar G p", grp, -k, prod(F, M, Tb, G, p1));
  b.add("F |T|^4 G", grp, k, prod(F, M, M, G));
  b.add("s F G p^3", grp, k, prod(s1, F, G, p3));
  b.add("F T G p^3", grp, -k, prod(F, T, G, p3));
  b.add("F T^2 G p^2", grp, 2 * k, prod(F, T2, G, p2), 2);
  b.add("F T^3 G p", grp, -k, prod(F, T3, G, p1));
  b.add("F T^2 |T|^2 G", grp, 2 * k, prod(F, T2, M, G), 2);
  b.add("s^3 F G p", grp, k, prod(s3, F, G, p1));
  b.add("s^3 F T G", grp, -k, prod(s3, F, T, G));
  b.add("s^2 F T^2 G", grp, 2 * k, prod(s2, F, T2, G), 2);
  b.add("s F T^3 G", grp, -k, prod(s1, F, T3, G));
  b.add("s^2 F Tbar G p", grp, -2 * k, prod(s2, F, Tb, G, p1), 2);
  b.add("s^2 F |T|^2 G", grp, 2 * k, prod(s2, F, M, G), 2);
  b.add("s F Tbar G p^2", grp, -2 * k, prod(s1, F, Tb, G, p2), 2);
  b.add("F |T|^2 G p^2", grp, 2 * k, prod(F, M, G, p2), 2);
}

void build_f7_full(Builder& b, Context& c) {
  add_leading(b, c);
  const auto& F = c.f;
  const auto& G = c.gl;
  const auto& T = c.top;
  const auto& Tb = c.tbar;
  const auto& M = c.mod;
  const auto& SR = c.sr;
  const auto& SL = c.sl;
  const auto& Qs = c.qs(1);
  const auto& Qp = c.qp(1);
  const auto s1 = c.sp(1), s2 = c.sp(2), s3 = c.sp(3);
  const auto p1 = c.pp(1), p2 = c.pp(2), p3 = c.pp(3);
  const auto& T2 = c.tpow(2);
  const CliffordOperator ps = M - c.s_num * c.t_plus_tbar;
  const CliffordOperator pq = M - c.p_num * c.t_plus_tbar;

  const std::string b1 = "block1";
  b.add("Q_s S_R G p^2", b1, 1, prod(Qs, SR, G, p2));
  b.add("Q_s S_R T G p", b1, -1, prod(Qs, SR, T, G, p1));
  b.add("Q_s S_R Tbar G p", b1, -1, prod(Qs, SR, Tb, G, p1));
  b.add("Q_s S_R |T|^2 G", b1, 1, prod(Qs, SR, M, G));
  b.add("s^2 F S_L Q_p", b1, 1, prod(s2, F, SL, Qp));
  b.add("s F T S_L Q_p", b1, -1, prod(s1, F, T, SL, Qp));
  b.add("s F Tbar S_L Q_p", b1, -1, prod(s1, F, Tb, SL, Qp));
  b.add("F |T|^2 S_L Q_p", b1, 1, prod(F, M, SL, Qp));
  b.add("Q_s G p", b1, 1, prod(Qs, G, p1));
  b.add("Q_s T G", b1, -1, prod(Qs, T, G));
  b.add("s F Q_p", b1, 1, prod(s1, F, Qp));
  b.add("F T Q_p", b1, -1, prod(F, T, Qp));

  const double k = 1.0 / c.g;
  const std::string b2 = "block2";
  b.add("s^3 F G p^3", b2, k, prod(s3, F, G, p3));
  b.add("s^3 F T G p^2", b2, -k, prod(s3, F, T, G, p2));
  b.add("s^2 F T G p^3", b2, -k, prod(s2, F, T, G, p3));
  b.add("s^2 F T^2 G p^2", b2, k, prod(s2, F, T2, G, p2));
  b.add("s^3 F G p P_p", b2, k, prod(s3, F, G, p1, pq));
  b.add("s^3 F T G P_p", b2, -k, prod(s3, F, T, G, pq));
  b.add("s^2 F T G p P_p", b2, -k, prod(s2, F, T, G, p1, pq));
  b.add("s^2 F T^2 G P_p", b2, k, prod(s2, F, T2, G, pq));
  b.add("P_s s F G p^3", b2, k, prod(ps, s1, F, G, p3));
  b.add("P_s s F T G p^2", b2, -k, prod(ps, s1, F, T, G, p2));
  b.add("P_s F T G p^3", b2, -k, prod(ps, F, T, G, p3));
  b.add("P_s F T^2 G p^2", b2, k, prod(ps, F, T2, G, p2));
  b.add("P_s s F G p P_p", b2, k, prod(ps, s1, F, G, p1, pq));
  b.add("P_s s F T G P_p", b2, -k, prod(ps, s1, F, T, G, pq));
  b.add("P_s F T G p P_p", b2, -k, prod(ps, F, T, G, p1, pq));
  b.add("P_s F T^2 G P_p", b2, k, prod(ps, F, T2, G, pq));
}

void build_pseudo_f(Builder& b, Context& c, bool h_even) {
  add_leading(b, c);
  const unsigned h = c.h;
  const auto& F = c.f;
  const auto& G = c.gl;
  const auto& T = c.top;
  const auto& Tb = c.tbar;
  const auto& Tb2 = c.tbpow(2);
  const auto& T2 = c.tpow(2);
  const auto s1 = c.sp(1);
  const auto p1 = c.pp(1);
  auto str = [](unsigned v) { return std::to_string(v); };

  const std::string gq = "gamma";
  for (unsigned i = 0; i + 2 <= h; ++i) {
    if (h_even && i == (h - 2) / 2) continue;
    const auto& a = c.qs(h - i);
    const auto& z = c.qp(i + 2);
    const std::string tag = "Q_s^" + str(h - i) + " . Q_p^" + str(i + 2);
    b.add("s " + tag + " p", gq, c.g, prod(s1, a, z, p1));
    b.add("s " + tag + " [Tbar]", gq, -c.g, prod(s1, a, Tb, z));
    b.add(tag + " [Tbar] p", gq, -c.g, prod(a, Tb, z, p1));
    b.add(tag + " [Tbar^2]", gq, c.g, prod(a, Tb2, z));
  }
  for (unsigned i = 0; i < h; ++i) {
    if (!h_even && i == (h - 1) / 2) continue;
    b.add("Q_s^" + str(h - i) + " Q_p^" + str(i + 1), gq, c.g, prod(c.qs(h - i), c.qp(i + 1)));
  }
  if (h_even) {
    const unsigned k2 = (h + 2) / 2;
    const auto& a = c.qs(k2);
    const auto& z = c.qp(k2);
    b.add("s Q_s^k Tbar Q_p^k", gq, -c.g, prod(s1, a, Tb, z));
    b.add("Q_s^k Tbar Q_p^k p", gq, -c.g, prod(a, Tb, z, p1));
    b.add("Q_s^k Tbar^2 Q_p^k", gq, c.g, prod(a, Tb2, z));
  }

  const double k = 1.0 / c.g;
  const std::string gi = "gamma_inv";
  b.add("s^h F G p^h", gi, k, prod(c.sp(h), F, G, c.pp(h)));
  b.add("s^h F T G p^(h-1)", gi, -k, prod(c.sp(h), F, T, G, c.pp(h - 1)));
  b.add("s^(h-1) F T G p^h", gi, -k, prod(c.sp(h - 1), F, T, G, c.pp(h)));
  b.add("s^(h-1) F T^2 G p^(h-1)", gi, k, prod(c.sp(h - 1), F, T2, G, c.pp(h - 1)));

  const unsigned m = h_even ? (h - 2) / 2 : (h - 1) / 2;
  const CliffordOperator xs = c.mod - 2.0 * (c.t0 * c.s_num);
  const CliffordOperator xp = c.mod - 2.0 * (c.t0 * c.p_num);
  std::vector<CliffordOperator> xs_pow{c.id}, xp_pow{c.id};
  for (unsigned j = 1; j <= m; ++j) {
    xs_pow.push_back(xs_pow.back() * xs);
    xp_pow.push_back(xp_pow.back() * xp);
  }

  for (unsigned j = 1; j <= m; ++j) {
    const double w = binomial(m, j) * k;
    const auto& x = xp_pow[j];
    const std::string tag = " X_p^" + str(j);
    const std::string gb = "binomial(" + str(m) + "," + str(j) + ")";
    b.add("s^h F" + tag + " G p^(h-2k)", gb, w, prod(c.sp(h), F, x, G, c.pp(h - 2 * j)));
    b.add("s^h F" + tag + " T G p^(h-1-2k)", gb, -w, prod(c.sp(h), F, x, T, G, c.pp(h - 1 - 2 * j)));
    b.add("s^(h-1) F T" + tag + " G p^(h-2k)", gb, -w, prod(c.sp(h - 1), F, T, x, G, c.pp(h - 2 * j)));
    b.add("s^(h-1) F T" + tag + " T G p^(h-1-2k)", gb, w, prod(c.sp(h - 1), F, T, x, T, G, c.pp(h - 1 - 2 * j)));
  }

  if (m == 0) return;
  CliffordOperator sa(c.n, c.d), sa2(c.n, c.d), sb(c.n, c.d), sb2(c.n, c.d), sc2(c.n, c.d), sc4(c.n, c.d);
  for (unsigned j = 1; j <= m; ++j) {
    const double w = binomial(m, j);
    sa.add_scaled(w, prod(c.sp(h - 2 * j), F, xs_pow[j]));
    sa2.add_scaled(w, prod(c.sp(h - 2 * j - 1), F, T, xs_pow[j]));
    sb.add_scaled(w, prod(xp_pow[j], G, c.pp(h - 2 * j)));
    sb2.add_scaled(w, prod(xp_pow[j], T, G, c.pp(h - 1 - 2 * j)));
    sc2.add_scaled(w, prod(c.sp(h - 2 * j), F, xs_pow[j], T));
    sc4.add_scaled(w, prod(c.sp(h - 1 - 2 * j), F, T, xs_pow[j], T));
  }
  b.add("S_a S_b", gi, k, sa * sb);
  b.add("S_a S_b'", gi, -k, sa * sb2);
  b.add("S_a' S_b", gi, -k, sa2 * sb);
  b.add("S_a' S_b'", gi, k, sa2 * sb2);
  b.add("S_a G p^h", gi, k, prod(sa, G, c.pp(h)));
  b.add("S_c G p^(h-1)", gi, -k, prod(sc2, G, c.pp(h - 1)));
  b.add("S_a' G p^h", gi, -k, prod(sa2, G, c.pp(h)));
  b.add("S_c' G p^(h-1)", gi, k, prod(sc4, G, c.pp(h - 1)));
}

unsigned f_order(EquationId id, unsigned n) {
  switch (id) {
    case EquationId::f3: return 3;
    case EquationId::f5_pseudo:
    case EquationId::f5_full: return 5;
    case EquationId::f7_pseudo:
    case EquationId::f7_full: return 7;
    default: return n;
  }
}

}  // namespace

std::string_view to_string(EquationId id) noexcept {
  switch (id) {
    case EquationId::s_eq: return "S_EQ";
    case EquationId::f3: return "F3";
    case EquationId::f5_pseudo: return "F5_PSEUDO";
    case EquationId::f5_full: return "F5_FULL";
    case EquationId::f7_pseudo: return "F7_PSEUDO";
    case EquationId::f7_full: return "F7_FULL";
    case EquationId::gen_pseudo: return "GEN_PSEUDO";
    case EquationId::pseudo_f_h_odd: return "PSEUDO_F_H_ODD";
    case EquationId::pseudo_f_h_even: return "PSEUDO_F_H_EVEN";
  }
  return "UNKNOWN";
}

EquationId parse_equation_id(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char ch) { return std::toupper(ch); });
  for (EquationId id : all_equations) {
    if (to_string(id) == upper) return id;
  }
  throw Error(ErrorCode::bad_spec, "unknown equation id '" + std::string(text) + "'");
}

bool equation_applies(EquationId id, unsigned n) {
  if (n % 2 == 0 || n < 3) return false;
  try {
    check_applies(id, n);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::vector<EquationId> equations_for(unsigned n) {
  std::vector<EquationId> out;
  for (EquationId id : all_equations) {
    if (equation_applies(id, n)) out.push_back(id);
  }
  return out;
}

nlohmann::ordered_json to_json(const ResidualReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = "1";
  j["equation_id"] = std::string(to_string(r.equation_id));
  j["n"] = r.n;
  j["d"] = r.d;
  j["seed"] = r.seed;
  j["s"] = {{"u", r.s.u}, {"v", r.s.v}};
  j["p"] = {{"u", r.p.u}, {"v", r.p.v}};
  j["lhs_norm"] = r.lhs_norm;
  j["rhs_norm"] = r.rhs_norm;
  j["residual_abs"] = r.residual_abs;
  j["residual_rel"] = r.residual_rel;
  j["commutator_noise"] = r.commutator_noise;
  return j;
}

CliffordOperator shared_rhs(const CliffordOperator& a, const CliffordOperator& b, const SlicePoint& s,
                            const SlicePoint& p) {
  check_same_slice(s, p);
  const cplx kernel = two_point_kernel(s, p);
  const CliffordOperator diff = a - b;
  return (diff * slice_embed(p) - slice_embed(s.conjugate()) * diff) * slice_embed(kernel, s.unit);
}

CliffordOperator f_shared_rhs(unsigned n, const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t) {
  return shared_rhs(f_resolvent_right(n, s, t), f_resolvent_left(n, p, t), s, p);
}

EquationSystem assemble_equation(EquationId id, const CommutingTuple& t, const SlicePoint& s, const SlicePoint& p) {
  const unsigned n = t.n();
  if (id != EquationId::s_eq) sce_exponent(n);
  check_applies(id, n);
  Context c(t, s, p);
  EquationSystem system{id, n, {}, {}};
  Builder b(system.lhs);
  if (id == EquationId::s_eq) {
    b.add("S_R(s) S_L(p)", "lead", 1.0, c.sr * c.sl);
    system.rhs = c.rhs(c.sr, c.sl);
    return system;
  }
  c.set_f(f_order(id, n));
  switch (id) {
    case EquationId::f3: build_f3(b, c); break;
    case EquationId::f5_pseudo:
    case EquationId::f7_pseudo:
    case EquationId::gen_pseudo: build_general_pseudo(b, c); break;
    case EquationId::f5_full: build_f5_full(b, c); break;
    case EquationId::f7_full: build_f7_full(b, c); break;
    case EquationId::pseudo_f_h_odd: build_pseudo_f(b, c, false); break;
    case EquationId::pseudo_f_h_even: build_pseudo_f(b, c, true); break;
    case EquationId::s_eq: break;
  }
  system.rhs = c.rhs(c.f, c.gl);
  return system;
}

ResidualReport evaluate_system(const EquationSystem& system, const CommutingTuple& t, const SlicePoint& s,
                               const SlicePoint& p, const Perturbation& perturbation) {
  CliffordOperator lhs(system.n, t.d());
  for (std::size_t k = 0; k < system.lhs.size(); ++k) {
    const Term& term = system.lhs[k];
    double coef = term.coef;
    switch (perturbation.mode) {
      case Perturbation::Mode::none: break;
      case Perturbation::Mode::scale_term:
        if (k == perturbation.index) coef *= perturbation.factor;
        break;
      case Perturbation::Mode::scale_group:
        if (term.group == perturbation.group) coef *= perturbation.factor;
        break;
      case Perturbation::Mode::drop_term:
        if (k == perturbation.index) coef = 0.0;
        break;
    }
    if (coef != 0.0) lhs.add_scaled(coef, term.value);
  }
  if ((perturbation.mode == Perturbation::Mode::scale_term || perturbation.mode == Perturbation::Mode::drop_term) &&
      perturbation.index >= system.lhs.size()) {
    throw Error(ErrorCode::out_of_range, std::string(to_string(system.id)) + " has " +
                                             std::to_string(system.lhs.size()) + " terms");
  }
  ResidualReport r;
  r.equation_id = system.id;
  r.n = system.n;
  r.d = t.d();
  r.seed = t.seed();
  r.s = s;
  r.p = p;
  r.lhs_norm = lhs.norm();
  r.rhs_norm = system.rhs.norm();
  r.residual_abs = (lhs - system.rhs).norm();
  r.residual_rel = r.residual_abs / std::max({1.0, r.lhs_norm, r.rhs_norm});
  r.commutator_noise = t.commutator_noise();
  return r;
}

ResidualReport equation_residual(EquationId id, const CommutingTuple& t, const SlicePoint& s, const SlicePoint& p,
                                 const Perturbation& perturbation) {
  return evaluate_system(assemble_equation(id, t, s, p), t, s, p, perturbation);
}

ResidualReport s_resolvent_eq_residual(const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t) {
  return equation_residual(EquationId::s_eq, t, s, p);
}
ResidualReport f_eq_n3_residual(const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t) {
  return equation_residual(EquationId::f3, t, s, p);
}
ResidualReport f_eq_n5_pseudo_residual(const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t) {
  return equation_residual(EquationId::f5_pseudo, t, s, p);
}
ResidualReport f_eq_n5_full_residual(const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t) {
  return equation_residual(EquationId::f5_full, t, s, p);
}
ResidualReport f_eq_n7_pseudo_residual(const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t) {
  return equation_residual(EquationId::f7_pseudo, t, s, p);
}
ResidualReport f_eq_n7_full_residual(const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t) {
  return equation_residual(EquationId::f7_full, t, s, p);
}

ResidualReport f_eq_general_residual(unsigned n, const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t) {
  if (t.n() != n) throw Error(ErrorCode::dimension_mismatch, "tuple does not match n");
  return equation_residual(EquationId::gen_pseudo, t, s, p);
}

ResidualReport pseudo_f_eq_h_odd_residual(unsigned n, const SlicePoint& s, const SlicePoint& p,
                                          const CommutingTuple& t) {
  if (t.n() != n) throw Error(ErrorCode::dimension_mismatch, "tuple does not match n");
  return equation_residual(EquationId::pseudo_f_h_odd, t, s, p);
}

ResidualReport pseudo_f_eq_h_even_residual(unsigned n, const SlicePoint& s, const SlicePoint& p,
                                           const CommutingTuple& t) {
  if (t.n() != n) throw Error(ErrorCode::dimension_mismatch, "tuple does not match n");
  return equation_residual(EquationId::pseudo_f_h_even, t, s, p);
}

std::pair<SlicePoint, SlicePoint> sample_admissible_points(const CommutingTuple& t, std::mt19937_64& rng,
                                                           double margin) {
  const unsigned n = t.n();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> dir(n);
  for (double& x : dir) x = normal(rng);
  const SliceUnit unit = SliceUnit::normalized(dir);

  const double scale = std::max(1.0, t.spectral_radius());
  std::uniform_real_distribution<double> coord(-2.0 * scale, 2.0 * scale);
  const auto spheres = joint_spectrum(t);
  auto clear = [&](cplx z) {
    for (const auto& sphere : spheres) {
      if (std::abs(z - sphere.upper()) < margin * scale || std::abs(z - sphere.lower()) < margin * scale) return false;
    }
    return true;
  };
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const cplx zs(coord(rng), coord(rng));
    const cplx zp(coord(rng), coord(rng));
    if (!clear(zs) || !clear(zp)) continue;
    const cplx base = zp * zp - 2.0 * zs.real() * zp + std::norm(zs);
    if (std::abs(base) < 0.1 * (std::norm(zs) + std::norm(zp))) continue;
    return {SlicePoint{zs.real(), zs.imag(), unit}, SlicePoint{zp.real(), zp.imag(), unit}};
  }
  throw Error(ErrorCode::bad_spec, "could not sample admissible points");
}

SubstitutionChain bisect_substitutions(EquationId id, const CommutingTuple& t, const SlicePoint& s,
                                       const SlicePoint& p, double tol) {
  SubstitutionChain chain;
  const unsigned n = t.n();
  if (id != EquationId::s_eq) {
    const unsigned order = f_order(id, n);
    chain.steps.push_back({"right F-resolvent equation at s", lr_f_resolvent_residual(order, s, t).right});
    chain.steps.push_back({"left F-resolvent equation at p", lr_f_resolvent_residual(order, p, t).left});
  }
  chain.steps.push_back({std::string(to_string(EquationId::s_eq)), equation_residual(EquationId::s_eq, t, s, p).residual_rel});
  auto push = [&](EquationId step) {
    chain.steps.push_back({std::string(to_string(step)), equation_residual(step, t, s, p).residual_rel});
  };
  switch (id) {
    case EquationId::f5_full: push(EquationId::f5_pseudo); break;
    case EquationId::f7_full: push(EquationId::f7_pseudo); break;
    case EquationId::pseudo_f_h_odd:
    case EquationId::pseudo_f_h_even:
    case EquationId::f5_pseudo:
    case EquationId::f7_pseudo: push(EquationId::gen_pseudo); break;
    default: break;
  }
  if (id != EquationId::s_eq && chain.steps.back().name != to_string(id)) push(id);
  for (std::size_t k = 0; k < chain.steps.size(); ++k) {
    if (!(chain.steps[k].residual_rel <= tol)) {
      chain.first_failing = k;
      break;
    }
  }
  return chain;
}

double slice_rotation_gap(EquationId id, const CommutingTuple& t, const SlicePoint& s, const SlicePoint& p,
                          const SliceUnit& other) {
  const double a = equation_residual(id, t, s, p).residual_rel;
  const double b = equation_residual(id, t, s.with_unit(other), p.with_unit(other)).residual_rel;
  return std::abs(a - b);
}

double scaling_covariance_gap(EquationId id, const CommutingTuple& t, const SlicePoint& s, const SlicePoint& p,
                              double c) {
  const double a = equation_residual(id, t, s, p).residual_rel;
  const SlicePoint cs{c * s.u, c * s.v, s.unit};
  const SlicePoint cp{c * p.u, c * p.v, p.unit};
  const double b = equation_residual(id, t.scaled(c), cs, cp).residual_rel;
  return std::abs(a - b);
}

}  // namespace cliffcalc
