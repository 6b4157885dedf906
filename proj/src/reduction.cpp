#include "twn/reduction.hpp"

#include <algorithm>

namespace twn {

bool dominates(const MarkedCoefficient &a, const MarkedCoefficient &b)
{
  return a.base != b.base ? a.base > b.base : a.npow > b.npow;
}

std::vector<MarkedCoefficient> marked_coeffs(const NPE &p)
{
  std::vector<MarkedCoefficient> out;
  for (const auto &t : p.terms)
    out.push_back({t.coeff, t.base, t.npow});
  if (out.empty())
    return {{Polynomial(), 1, 0}};
  std::sort(out.begin(), out.end(), dominates);
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!dominates(out[i - 1], out[i]))
      throw Error("NPE has repeated (base, exponent) pairs");
  return out;
}

Formula red_atom(const NPE &p, Rel rel)
{
  if (rel == Rel::Equal)
    throw PreconditionError("red is defined for > and >= atoms only");
  auto alpha = marked_coeffs(p);
  std::vector<Formula> disjuncts;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    std::vector<Formula> conj{Formula(Atom{alpha[j].coeff, Rel::Greater})};
    for (std::size_t i = 0; i < j; ++i)
      conj.emplace_back(Atom{alpha[i].coeff, Rel::Equal});
    disjuncts.push_back(Formula::conj(std::move(conj)));
  }
  if (rel == Rel::GreaterEq) {
    std::vector<Formula> zero;
    for (const auto &a : alpha)
      zero.emplace_back(Atom{a.coeff, Rel::Equal});
    disjuncts.push_back(Formula::conj(std::move(zero)));
  }
  return Formula::disj(std::move(disjuncts));
}

NPE compose_npe(const Polynomial &p, const std::vector<Var> &vars, const std::vector<NPE> &q_norm)
{
  std::vector<PolyExp> q;
  q.reserve(q_norm.size());
  for (const auto &n : q_norm)
    q.push_back(n.to_polyexp());
  return normalize(substitute_polyexp(p, vars, q));
}

Formula red_formula(const Formula &guard, const std::vector<Var> &vars, const std::vector<NPE> &q_norm)
{
  return guard.map([&](const Atom &a) { return red_atom(compose_npe(a.poly, vars, q_norm), a.rel); });
}

CertificateFormula build_certificate(const Loop &loop, const DefinableSet &f)
{
  auto q = closed_form(loop);
  std::vector<NPE> q_norm;
  for (const auto &qi : q)
    q_norm.push_back(normalize(qi));
  CertificateFormula cert;
  cert.real_consts = loop.vars;
  cert.int_consts = f.int_vars;
  cert.real_aux = f.real_vars;
  cert.body = f.constraint && red_formula(loop.guard, loop.vars, q_norm);
  return cert;
}

Point extract_witness(const Point &model_point, const PipelineTrace &trace)
{
  Point p = model_point;
  for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
    switch (it->kind) {
    case TraceStep::Kind::Chain:
      break;
    case TraceStep::Kind::Transform:
      p = apply_inverse_point(*it->eta, p);
      break;
    case TraceStep::Kind::Homogenize:
      if (p.empty() || p.back() != 1)
        throw Error("homogenizing variable of the witness is not 1");
      p.pop_back();
      break;
    }
  }
  return p;
}

} // namespace twn
