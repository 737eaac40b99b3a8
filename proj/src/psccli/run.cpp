#include "psc/psccli/run.hpp"

#include <chrono>
#include <sstream>

#include "psc/exprcore/calculus.hpp"

namespace psc {

using nlohmann::ordered_json;

namespace {

const char* const kCommands[] = {"check-psc", "cohomology", "condition2", "reduce", "compare"};

ordered_json strings(const std::vector<Expr>& v) {
  ordered_json out = ordered_json::array();
  for (const Expr& e : v) out.push_back(to_string(e));
  return out;
}

ordered_json matrix_json(const ExprMatrix& m) {
  ordered_json out = ordered_json::array();
  for (const auto& row : m) out.push_back(strings(row));
  return out;
}

class Pipeline {
 public:
  Pipeline(const ProblemSpec& spec, const RunOptions& opt) : s_(spec), opt_(opt) {
    if (!s_.generators.empty()) action_ = ActionSpec{s_.chart, s_.generators};
  }

  ordered_json condition1() {
    auto t0 = std::chrono::steady_clock::now();
    ordered_json out;
    ordered_json alg;
    LieAlgebra L;
    Subalgebra h;
    std::size_t orbit = 0;
    if (s_.algebra) {
      L = *s_.algebra;
      h = subalgebra(L, s_.isotropy);
      orbit = static_cast<std::size_t>(L.n) - h.dim();
      alg["source"] = "structure_constants";
    } else {
      if (!s_.point) throw ProblemError("condition (i) needs a 'point'", "/point", 0, 0);
      try {
        L = lie_algebra_from_fields(s_.generators, s_.chart);
      } catch (const std::invalid_argument& e) {
        throw ProblemError(std::string("generators: ") + e.what(), "/generators", 0, 0);
      }
      L.assumptions = point_assumptions(*action_, *s_.point);
      iso_ = isotropy_subalgebra(*action_, *s_.point);
      h = subalgebra(L, iso_->basis);
      orbit = orbit_dimension(*action_, *s_.point).dimension;
      alg["source"] = "generators";
    }
    alg["dimension"] = L.n;
    alg["labels"] = L.labels;
    ordered_json se = ordered_json::array();
    const auto pairs = ordered_subsets(L.n, 2);
    for (int a = 0; a < L.n; ++a) {
      Cochain w;
      for (const Index& bc : pairs) w.push_back(normalize(-L.constant(a, bc[0], bc[1]), L.assumptions));
      se.push_back("dθ" + std::to_string(a + 1) + " = " + cochain_string(w, L.n, 2));
    }
    alg["structure_equations"] = se;
    const JacobiResult jac = jacobi_check(L);
    alg["jacobi"] = jac.holds;
    if (!jac.holds) throw ProblemError("structure constants violate the Jacobi identity", "/structure_constants", 0, 0);
    const UnimodularResult uni = is_unimodular(L);
    alg["unimodular"] = to_string(uni.verdict);
    alg["traces"] = strings(uni.traces);
    out["algebra"] = alg;

    ordered_json iso;
    iso["dimension"] = h.dim();
    ordered_json basis = ordered_json::array();
    for (const auto& v : h.basis) basis.push_back(strings(v));
    iso["basis"] = basis;
    if (iso_) {
      iso["representation_checked"] = iso_->representation_checked;
      ordered_json lin = ordered_json::array();
      for (const auto& m : iso_->linearizations) lin.push_back(matrix_json(m));
      iso["linearizations"] = lin;
    }
    out["isotropy"] = iso;
    out["orbit_dimension"] = orbit;

    const int k = opt_.degree ? *opt_.degree : s_.degree ? *s_.degree : static_cast<int>(orbit);
    const CohomologyResult H = relative_cohomology(L, h, k);
    out["degree"] = k;
    out["cochain_dimension"] = H.cochains.size();
    out["rank_in"] = H.rank_in;
    out["rank_out"] = H.rank_out;
    out["dimension"] = H.dimension;
    out["conditions"] = strings(H.conditions);
    ordered_json reps = ordered_json::array();
    for (const Cochain& w : H.representatives) reps.push_back(cochain_string(w, L.n, k));
    out["representatives"] = reps;
    ordered_json degenerate = ordered_json::array();
    for (const Expr& c : H.conditions) {
      ordered_json d;
      d["when"] = to_string(c) + " = 0";
      if (c.is(Kind::Symbol)) {
        const ExprMap<Expr> zero{{c, Expr(0)}};
        try {
          const CohomologyResult H0 = relative_cohomology(substitute(L, zero), substitute(h, zero), k);
          d["dimension"] = H0.dimension;
        } catch (const std::exception& e) {
          d["dimension"] = nullptr;
          d["note"] = e.what();
        }
      } else {
        d["dimension"] = nullptr;
        d["note"] = "not rechecked; substitute a parameter value with --set";
      }
      degenerate.push_back(d);
    }
    out["degenerate_cases"] = degenerate;
    c1_.degree = k;
    c1_.dimension = H.dimension;
    out["pass"] = c1_.pass();
    out["caveat"] = "computed on the Lie algebra of the isotropy; a disconnected isotropy group may differ";
    time("condition1", t0);
    return out;
  }

  ordered_json condition2() {
    auto t0 = std::chrono::steady_clock::now();
    ordered_json out;
    out["fiber"] = s_.fiber;
    if (!action_ || !s_.point) {
      const bool trivial = s_.algebra && s_.isotropy.empty();
      if (!trivial) throw ProblemError("condition (ii) needs 'generators' and a 'point'", "/generators", 0, 0);
      // trivial isotropy: V_p is the whole fiber and its annihilator is zero
      out["trivial_isotropy"] = true;
      out["intersection"] = ordered_json::array();
      out["intersection_dimension"] = 0;
      out["pass"] = true;
      c2_.intersection_dim = 0;
      time("condition2", t0);
      return out;
    }
    const FiberBasis& fb = fiber();
    auto render = [&](const std::vector<FiberVector>& v, bool dual) {
      ordered_json a = ordered_json::array();
      for (const FiberVector& f : v) a.push_back(model().element_string(f, *s_.chart, dual));
      return a;
    };
    out["vp"] = render(fb.vp, false);
    out["vp_star"] = render(fb.vp_star, true);
    out["annihilator_dimension"] = fb.annihilator.size();
    out["intersection"] = render(fb.intersection, true);
    out["intersection_dimension"] = fb.intersection.size();
    out["conditions"] = strings(fb.conditions);
    out["pass"] = fb.pass;
    c2_.intersection_dim = fb.intersection.size();
    time("condition2", t0);
    return out;
  }

  ordered_json reduce() {
    auto t0 = std::chrono::steady_clock::now();
    if (!action_) throw ProblemError("reduction needs 'generators'", "/generators", 0, 0);
    if (!s_.chi) throw ProblemError("reduction needs 'chi'", "/chi", 0, 0);
    if (s_.lagrangian == LagrangianKind::None) throw ProblemError("reduction needs a 'lagrangian'", "/lagrangian", 0, 0);
    ordered_json out;
    const AssumptionSet& A = s_.chart->assumptions;
    TensorField lambda;
    if (s_.lagrangian == LagrangianKind::EinsteinHilbert) {
      const AnsatzCheck ac = verify_invariant_ansatz(*action_, *s_.ansatz);
      out["ansatz_invariant"] = ac.invariant;
      if (!ac.invariant) throw ProblemError("the metric ansatz is not invariant under the generators", "/ansatz", 0, 0);
      try {
        curv_ = curvature_suite(*s_.ansatz, s_.det_sign);
      } catch (const std::domain_error& e) {
        throw ProblemError(std::string("ansatz: ") + e.what(), "/ansatz", 0, 0);
      }
      out["metric_determinant"] = to_string(curv_->det);
      out["scalar_curvature"] = to_string(curv_->scalar);
      lambda = einstein_hilbert(*curv_);
      out["eta"] = {{"checked", false}, {"note", "η of the Einstein-Hilbert Lagrangian is not constructed"}};
    } else {
      const auto& coords = s_.chart->coords;
      for (const std::string& f : s_.density_fields) {
        const Expr phi = s_.field_ansatz.at(Expr::symbol(f, SymbolRole::ReducedField));
        jets_[Expr::symbol(f, SymbolRole::ReducedField)] = phi;
        for (std::size_t a = 0; a < coords.size(); ++a) {
          const Expr da = differentiate(phi, coords[a]);
          jets_[jet_symbol(f, coords, {static_cast<int>(a)})] = da;
          for (std::size_t b = a; b < coords.size(); ++b)
            jets_[jet_symbol(f, coords, {static_cast<int>(a), static_cast<int>(b)})] = differentiate(da, coords[b]);
        }
      }
      lambda = TensorField::form(s_.chart, static_cast<int>(coords.size()));
      Index top;
      for (std::size_t a = 0; a < coords.size(); ++a) top.push_back(static_cast<int>(a));
      lambda.set(top, normalize(psc::substitute(s_.density * s_.volume, jets_), A));
      const EtaCheck ec = verify_eta_invariance(*action_, s_.density * s_.volume, s_.density_fields, jets_);
      ordered_json eta{{"checked", ec.checked}};
      if (ec.checked) {
        eta["invariant"] = ec.invariant;
        if (!ec.invariant) eta["note"] = "warning: η is not G-invariant; the reduction identity may fail";
      } else {
        eta["note"] = "boundary identity fails for this density; η not checked";
      }
      out["eta"] = eta;
    }
    const ChiCheck cc = verify_chi(*action_, *s_.chi);
    ordered_json chi;
    chi["degree"] = s_.chi->up();
    chi["orbit_dimension"] = cc.orbit_dim;
    chi["degree_ok"] = cc.degree_ok;
    chi["invariant"] = cc.invariant;
    chi["tangent"] = cc.tangent;
    out["chi"] = chi;
    if (!cc.pass()) throw ProblemError("chi must be an invariant multivector tangent to the orbits", "/chi", 0, 0);
    ReducedLagrangian rl;
    try {
      rl = reduce_lagrangian(lambda, *s_.chi, *action_, s_.quotient);
    } catch (const std::invalid_argument& e) {
      throw ProblemError(std::string("quotient: ") + e.what(), "/quotient_coordinates", 0, 0);
    }
    out["coordinates"] = strings(rl.coords);
    out["density"] = to_string(rl.density);
    out["basic"] = rl.basic;
    out["caveat"] = "assumes the reduced bundle is a smooth fiber bundle near the slice; not checked";
    VariationalBase base{rl.coords, s_.reduced_fields};
    el_ = euler_operator(rl.density, base, A);
    time("reduce", t0);
    return out;
  }

  ordered_json el_json() const {
    ordered_json out = ordered_json::array();
    for (const auto& [f, e] : el_) out.push_back({{"field", f}, {"expression", to_string(e)}});
    return out;
  }

  ordered_json reduced_equations() {
    auto t0 = std::chrono::steady_clock::now();
    const AssumptionSet& A = s_.chart->assumptions;
    eqs_.clear();
    if (s_.lagrangian == LagrangianKind::EinsteinHilbert) {
      if (!s_.point) throw ProblemError("reduced equations need a 'point'", "/point", 0, 0);
      eqs_ = reduced_field_equations(*curv_, fiber().vp_star);
      for (ReducedEquation& r : eqs_) r.expression = normalize(psc::substitute(r.expression, s_.quotient.slice), A);
    } else {
      VariationalBase full{s_.chart->coords, s_.density_fields};
      for (const auto& [f, e] : euler_operator(s_.density * s_.volume, full, A))
        eqs_.push_back(ReducedEquation{"E(" + f + ")", {},
                                       normalize(psc::substitute(psc::substitute(e, jets_), s_.quotient.slice), A)});
    }
    ordered_json out = ordered_json::array();
    for (const ReducedEquation& r : eqs_) out.push_back({{"label", r.label}, {"expression", to_string(r.expression)}});
    time("reduced_equations", t0);
    return out;
  }

  ordered_json compare() {
    auto t0 = std::chrono::steady_clock::now();
    if (s_.pairings.empty()) throw ProblemError("comparison needs 'pairings'", "/pairings", 0, 0);
    const AssumptionSet& A = s_.chart->assumptions;
    std::vector<Pairing> pairings = s_.pairings;
    if (curv_) {
      const ExprMap<Expr> det{{Expr::symbol("det"), normalize(Expr(s_.det_sign) * curv_->det, A)}};
      for (Pairing& p : pairings) p.weight = normalize(psc::substitute(p.weight, det), A);
    }
    for (const Pairing& p : pairings)
      if (p.equation && std::none_of(eqs_.begin(), eqs_.end(), [&](const ReducedEquation& r) { return r.label == *p.equation; })) {
        // a pairing may name an equation that vanishes identically
        bool known = false;
        if (curv_) {
          const std::string& l = *p.equation;
          known = l.size() == 3 && l[0] == 'E';
        }
        if (!known)
          throw ProblemError("pairing for '" + p.field + "' names unknown equation '" + *p.equation + "'",
                             "/pairings/" + p.field + "/equation", 0, 0);
      }
    std::vector<Expr> exclude;
    if (s_.quotient.coords.empty())
      for (const std::string& f : s_.reduced_fields) exclude.push_back(Expr::symbol(f, SymbolRole::ReducedField));
    cmp_ = psc_compare(el_, eqs_, pairings, s_.quotient.slice, A, exclude);
    ordered_json items = ordered_json::array();
    for (std::size_t i = 0; i < cmp_->discrepancies.size(); ++i) {
      const Discrepancy& d = cmp_->discrepancies[i];
      ordered_json j;
      j["field"] = d.field;
      j["equation"] = d.equation ? ordered_json(*d.equation) : ordered_json(nullptr);
      const Pairing* p = nullptr;
      for (const Pairing& q : pairings)
        if (q.field == d.field) p = &q;
      j["weight"] = p ? to_string(p->weight) : "1";
      j["expression"] = to_string(d.expression);
      j["status"] = to_string(d.status);
      j["zero_when"] = strings(d.zero_when);
      items.push_back(j);
    }
    ordered_json out;
    out["items"] = items;
    out["unenforced"] = cmp_->unenforced;
    out["agrees"] = cmp_->agrees();
    time("compare", t0);
    return out;
  }

  const ConditionOne& c1() const { return c1_; }
  const ConditionTwo& c2() const { return c2_; }
  const Comparison* comparison() const { return cmp_ ? &*cmp_ : nullptr; }
  bool can_reduce() const {
    return action_ && s_.chi && s_.lagrangian != LagrangianKind::None && !s_.pairings.empty();
  }
  ordered_json timings() const {
    if (!opt_.timings) return {{"recorded", false}};
    ordered_json t;
    t["recorded"] = true;
    ordered_json st;
    for (const auto& [k, v] : times_) st[k] = v;
    t["stages_ms"] = st;
    return t;
  }

 private:
  Subalgebra subalgebra(const LieAlgebra& L, const std::vector<std::vector<Expr>>& basis) {
    try {
      return make_subalgebra(L, basis);
    } catch (const std::invalid_argument& e) {
      throw ProblemError(std::string("isotropy: ") + e.what(), "/isotropy", 0, 0);
    }
  }
  const VerticalModel& model() {
    if (!model_) model_ = make_vertical_model(s_.fiber);
    return *model_;
  }
  const FiberBasis& fiber() {
    if (!fiber_) fiber_ = condition2_check(*action_, *s_.point, model());
    return *fiber_;
  }
  void time(const std::string& stage, std::chrono::steady_clock::time_point t0) {
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    times_.emplace_back(stage, ms);
  }

  const ProblemSpec& s_;
  RunOptions opt_;
  std::optional<ActionSpec> action_;
  std::optional<IsotropyData> iso_;
  std::shared_ptr<const VerticalModel> model_;
  std::optional<FiberBasis> fiber_;
  std::optional<CurvatureBundle> curv_;
  ExprMap<Expr> jets_;
  EulerLagrangeSet el_;
  std::vector<ReducedEquation> eqs_;
  std::optional<Comparison> cmp_;
  ConditionOne c1_;
  ConditionTwo c2_;
  std::vector<std::pair<std::string, double>> times_;
};

}  // namespace

bool is_command(const std::string& command) {
  for (const char* c : kCommands)
    if (command == c) return true;
  return false;
}

ordered_json run(const std::string& command, const ProblemSpec& spec, const RunOptions& options) {
  if (!is_command(command)) throw ProblemError("unknown command '" + command + "'", "", 0, 0);
  Pipeline p(spec, options);
  ordered_json r;
  r["version"] = kReportVersion;
  r["command"] = command;
  r["problem"] = spec.name;
  ordered_json sets = ordered_json::object();
  for (const std::string& name : spec.parameters) {
    auto it = spec.substitutions.find(Expr::symbol(name));
    if (it != spec.substitutions.end()) sets[name] = to_string(it->second);
  }
  r["substitutions"] = sets;
  r["verdict"] = nullptr;
  r["condition1"] = nullptr;
  r["condition2"] = nullptr;
  r["reduced_lagrangian"] = nullptr;
  r["el_equations"] = nullptr;
  r["reduced_equations"] = nullptr;
  r["discrepancies"] = nullptr;

  if (command == "check-psc" || command == "cohomology") r["condition1"] = p.condition1();
  if (command == "check-psc" || command == "condition2") r["condition2"] = p.condition2();
  const bool full = command == "check-psc" && p.can_reduce();
  if (command == "reduce" || command == "compare" || full) {
    r["reduced_lagrangian"] = p.reduce();
    r["el_equations"] = p.el_json();
  }
  if (command == "compare" || full) {
    r["reduced_equations"] = p.reduced_equations();
    r["discrepancies"] = p.compare();
  }
  if (command == "check-psc") r["verdict"] = overall_verdict(p.c1(), p.c2(), p.comparison());
  r["timings"] = p.timings();
  return r;
}

namespace {

std::string str(const ordered_json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

}  // namespace

std::string render_text(const ordered_json& r) {
  std::ostringstream o;
  o << "problem: " << str(r["problem"]) << "\n";
  o << "command: " << str(r["command"]) << "\n";
  if (!r["substitutions"].empty()) {
    o << "substitutions:";
    for (auto it = r["substitutions"].begin(); it != r["substitutions"].end(); ++it)
      o << " " << it.key() << "=" << str(it.value());
    o << "\n";
  }
  if (!r["verdict"].is_null()) o << "verdict: " << str(r["verdict"]) << "\n";
  if (const auto& c = r["condition1"]; !c.is_null()) {
    o << "\ncondition (i)\n";
    o << "  algebra: dimension " << c["algebra"]["dimension"] << " from " << str(c["algebra"]["source"]) << "\n";
    for (const auto& e : c["algebra"]["structure_equations"]) o << "    " << str(e) << "\n";
    o << "  unimodular: " << str(c["algebra"]["unimodular"]) << "\n";
    o << "  isotropy dimension " << c["isotropy"]["dimension"];
    for (const auto& v : c["isotropy"]["basis"]) {
      o << " [";
      for (std::size_t i = 0; i < v.size(); ++i) o << (i ? ", " : "") << str(v[i]);
      o << "]";
    }
    o << "\n  orbit dimension " << c["orbit_dimension"] << "\n";
    o << "  H^" << c["degree"] << " dimension " << c["dimension"] << " (cochains " << c["cochain_dimension"]
      << ", rank in " << c["rank_in"] << ", rank out " << c["rank_out"] << ")\n";
    for (const auto& w : c["representatives"]) o << "    representative " << str(w) << "\n";
    for (const auto& d : c["degenerate_cases"])
      o << "  degenerate when " << str(d["when"]) << ": dimension "
        << (d["dimension"].is_null() ? std::string("not rechecked") : d["dimension"].dump()) << "\n";
    o << "  " << (c["pass"].get<bool>() ? "pass" : "fail") << "\n";
    o << "  note: " << str(c["caveat"]) << "\n";
  }
  if (const auto& c = r["condition2"]; !c.is_null()) {
    o << "\ncondition (ii)\n";
    if (c.contains("trivial_isotropy")) {
      o << "  trivial isotropy\n";
    } else {
      o << "  fiber: " << str(c["fiber"]) << "\n";
      for (const char* key : {"vp", "vp_star"}) {
        o << "  " << key << ":\n";
        for (const auto& e : c[key]) o << "    " << str(e) << "\n";
      }
    }
    o << "  intersection dimension " << c["intersection_dimension"] << "\n";
    for (const auto& e : c["intersection"]) o << "    " << str(e) << "\n";
    o << "  " << (c["pass"].get<bool>() ? "pass" : "fail") << "\n";
  }
  if (const auto& c = r["reduced_lagrangian"]; !c.is_null()) {
    o << "\nreduction\n";
    o << "  chi: degree " << c["chi"]["degree"] << ", invariant " << c["chi"]["invariant"] << ", tangent "
      << c["chi"]["tangent"] << "\n";
    if (c.contains("scalar_curvature")) o << "  R = " << str(c["scalar_curvature"]) << "\n";
    o << "  reduced Lagrangian: " << str(c["density"]);
    for (const auto& q : c["coordinates"]) o << " d" << str(q);
    o << "\n";
    const auto& eta = c["eta"];
    if (eta["checked"].get<bool>()) o << "  eta: invariant " << eta["invariant"] << "\n";
    if (eta.contains("note")) o << "  eta: " << str(eta["note"]) << "\n";
    o << "  note: " << str(c["caveat"]) << "\n";
  }
  if (const auto& c = r["el_equations"]; !c.is_null())
    for (const auto& e : c) o << "  E_" << str(e["field"]) << " = " << str(e["expression"]) << "\n";
  if (const auto& c = r["reduced_equations"]; !c.is_null()) {
    o << "\nreduced equations\n";
    for (const auto& e : c) o << "  " << str(e["label"]) << " = " << str(e["expression"]) << "\n";
  }
  if (const auto& c = r["discrepancies"]; !c.is_null()) {
    o << "\ndiscrepancies\n";
    for (const auto& d : c["items"]) {
      o << "  " << str(d["field"]) << " vs " << (d["equation"].is_null() ? std::string("(none)") : str(d["equation"]))
        << ": " << str(d["expression"]) << " [" << str(d["status"]);
      if (!d["zero_when"].empty()) {
        o << ", zero when";
        for (const auto& z : d["zero_when"]) o << " " << str(z) << "=0";
      }
      o << "]\n";
    }
    if (!c["unenforced"].empty()) {
      o << "  not implied by the reduced Lagrangian:";
      for (const auto& u : c["unenforced"]) o << " " << str(u);
      o << "\n";
    }
  }
  if (r["timings"].value("recorded", false)) {
    o << "\ntimings (ms)\n";
    for (auto it = r["timings"]["stages_ms"].begin(); it != r["timings"]["stages_ms"].end(); ++it)
      o << "  " << it.key() << " " << it.value().dump() << "\n";
  }
  return o.str();
}

}  // namespace psc
