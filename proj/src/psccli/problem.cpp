#include "psc/psccli/problem.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "psc/exprcore/calculus.hpp"
#include "psc/exprcore/parse.hpp"

namespace psc {

using nlohmann::json;

ProblemError::ProblemError(const std::string& message, std::string pointer, std::size_t line, std::size_t column)
    : std::runtime_error(message), pointer_(std::move(pointer)), line_(line), column_(column) {}

namespace {

std::string escape_token(const std::string& t) {
  std::string out;
  for (char c : t) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

struct Scanner {
  const std::string& s;
  std::map<std::string, std::size_t>& out;
  std::size_t i = 0;

  void ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
  }
  std::string str() {
    std::string v;
    ++i;  // opening quote
    while (i < s.size() && s[i] != '"') {
      if (s[i] == '\\' && i + 1 < s.size()) {
        v += s[i + 1];
        i += 2;
        continue;
      }
      v += s[i++];
    }
    ++i;
    return v;
  }
  void value(const std::string& ptr) {
    ws();
    if (i >= s.size()) return;
    if (!out.count(ptr)) out[ptr] = i;
    const char c = s[i];
    if (c == '{') {
      ++i;
      ws();
      if (i < s.size() && s[i] == '}') {
        ++i;
        return;
      }
      while (i < s.size()) {
        ws();
        const std::size_t at = i;
        const std::string key = str();
        const std::string child = ptr + "/" + escape_token(key);
        out[child] = at;
        ws();
        ++i;  // colon
        value(child);
        ws();
        if (i < s.size() && s[i] == ',') {
          ++i;
          continue;
        }
        ++i;  // closing brace
        return;
      }
    } else if (c == '[') {
      ++i;
      ws();
      if (i < s.size() && s[i] == ']') {
        ++i;
        return;
      }
      for (std::size_t k = 0; i < s.size(); ++k) {
        value(ptr + "/" + std::to_string(k));
        ws();
        if (i < s.size() && s[i] == ',') {
          ++i;
          continue;
        }
        ++i;
        return;
      }
    } else if (c == '"') {
      str();
    } else {
      while (i < s.size() && s[i] != ',' && s[i] != '}' && s[i] != ']' && s[i] != ' ' && s[i] != '\n' && s[i] != '\r' &&
             s[i] != '\t')
        ++i;
    }
  }
};

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class Loader {
 public:
  Loader(const std::string& text, std::string origin) : text_(text), origin_(std::move(origin)) {
    try {
      root_ = json::parse(text);
    } catch (const json::parse_error& e) {
      const auto [l, c] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
      std::string what = e.what();
      const auto p = what.find("syntax error");
      throw ProblemError(origin_ + ":" + std::to_string(l) + ":" + std::to_string(c) + ": invalid JSON: " +
                             (p == std::string::npos ? what : what.substr(p)),
                         "", l, c);
    }
    pos_ = json_positions(text);
  }

  [[noreturn]] void fail(const std::string& msg, const std::string& ptr, std::size_t extra = 0) const {
    std::size_t l = 0, c = 0;
    std::string where = origin_;
    auto it = pos_.find(ptr);
    if (it != pos_.end()) {
      std::tie(l, c) = line_col(text_, it->second + extra);
      where += ":" + std::to_string(l) + ":" + std::to_string(c);
    }
    throw ProblemError(where + ": " + (ptr.empty() ? "/" : ptr) + ": " + msg, ptr, l, c);
  }

  const json& root() const { return root_; }

  void check_keys(const json& obj, const std::string& ptr, const std::set<std::string>& allowed) const {
    if (!obj.is_object()) fail("expected an object", ptr);
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!allowed.count(it.key())) fail("unknown key '" + it.key() + "'", ptr + "/" + escape_token(it.key()));
  }

  const std::string& string_at(const json& v, const std::string& ptr) const {
    if (!v.is_string()) fail("expected a string", ptr);
    return v.get_ref<const std::string&>();
  }

  Expr expr(const json& v, const std::string& ptr, const std::set<std::string>& allowed_symbols,
            bool substitute_sets = true) const {
    std::string text;
    if (v.is_string()) text = v.get<std::string>();
    else if (v.is_number_integer()) text = std::to_string(v.get<long long>());
    else fail("expected an expression string", ptr);
    Expr e;
    try {
      e = parse(text, options_);
    } catch (const ParseError& err) {
      fail(std::string("expression error: ") + err.what(), ptr, v.is_string() ? 1 + err.offset() : 0);
    }
    ExprMap<bool> syms, fns;
    collect_atoms(e, syms, fns);
    for (const auto& [s, _] : syms)
      if (!allowed_symbols.count(s.name())) fail("unresolved symbol '" + s.name() + "'", ptr);
    if (substitute_sets && !sets_.empty()) e = normalize(psc::substitute(e, sets_));
    return e;
  }

  ParseOptions options_;
  ExprMap<Expr> sets_;

 private:
  const std::string& text_;
  std::string origin_;
  json root_;
  std::map<std::string, std::size_t> pos_;
};

Index parse_index(const std::string& key, std::size_t n, int rank, const Loader& L, const std::string& ptr) {
  Index idx;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument("junk");
    } catch (const std::exception&) {
      L.fail("bad component index '" + key + "'", ptr);
    }
    if (v < 1 || v > static_cast<int>(n)) L.fail("component index out of range in '" + key + "'", ptr);
    idx.push_back(v - 1);
  }
  if (static_cast<int>(idx.size()) != rank) L.fail("component index '" + key + "' has wrong length", ptr);
  return idx;
}

}  // namespace

std::map<std::string, std::size_t> json_positions(const std::string& text) {
  std::map<std::string, std::size_t> out;
  Scanner sc{text, out};
  sc.value("");
  return out;
}

ProblemSpec parse_problem(const std::string& text, const std::string& origin,
                          const std::vector<std::pair<std::string, std::string>>& sets) {
  Loader L(text, origin);
  const json& j = L.root();
  L.check_keys(j, "", {"name", "description", "coordinates", "parameters", "functions", "assumptions", "generators",
                       "structure_constants", "isotropy", "point", "atoms", "fiber", "ansatz", "det_sign",
                       "reduced_fields", "chi", "lagrangian", "quotient_coordinates", "invariants", "slice",
                       "pairings", "degree"});
  ProblemSpec P;
  P.origin = origin;
  if (j.contains("name")) P.name = L.string_at(j["name"], "/name");

  auto string_list = [&](const char* key) {
    std::vector<std::string> out;
    if (!j.contains(key)) return out;
    const std::string ptr = std::string("/") + key;
    if (!j[key].is_array()) L.fail("expected an array of names", ptr);
    for (std::size_t i = 0; i < j[key].size(); ++i) {
      const std::string& s = L.string_at(j[key][i], ptr + "/" + std::to_string(i));
      bool ok = !s.empty() && std::isalpha(static_cast<unsigned char>(s[0]));
      for (char c : s) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
      if (!ok) L.fail("invalid identifier '" + s + "'", ptr + "/" + std::to_string(i));
      out.push_back(s);
    }
    return out;
  };

  const std::vector<std::string> coords = string_list("coordinates");
  P.parameters = string_list("parameters");
  P.functions = string_list("functions");
  P.reduced_fields = string_list("reduced_fields");
  const std::vector<std::string> qcoords = string_list("quotient_coordinates");
  if (qcoords.size() > 1) L.fail("at most one quotient coordinate is supported", "/quotient_coordinates");
  if (!j.contains("generators") && !j.contains("structure_constants"))
    L.fail("one of 'generators' or 'structure_constants' is required", "");
  if (j.contains("generators") && coords.empty()) L.fail("'generators' needs 'coordinates'", "/generators");

  // names
  std::set<std::string> base;
  for (const auto& v : {coords, P.parameters, qcoords}) base.insert(v.begin(), v.end());
  std::set<std::string> fnames(P.functions.begin(), P.functions.end());
  // reduced fields are symbols on a 0-dimensional quotient, functions otherwise
  const bool field_functions = !qcoords.empty();
  if (field_functions) fnames.insert(P.reduced_fields.begin(), P.reduced_fields.end());
  else base.insert(P.reduced_fields.begin(), P.reduced_fields.end());
  L.options_.coordinates = std::set<std::string>(coords.begin(), coords.end());
  if (!field_functions) L.options_.reduced_fields = std::set<std::string>(P.reduced_fields.begin(), P.reduced_fields.end());
  L.options_.functions = fnames;

  for (const auto& [name, value] : sets) {
    if (std::find(P.parameters.begin(), P.parameters.end(), name) == P.parameters.end())
      throw ProblemError("--set " + name + ": not a declared parameter", "/parameters", 0, 0);
    Expr v;
    try {
      v = parse(value);
    } catch (const ParseError& e) {
      throw ProblemError("--set " + name + "=" + value + ": " + e.what(), "", 0, 0);
    }
    ExprMap<bool> syms, fns;
    collect_atoms(v, syms, fns);
    for (const auto& [s, _] : syms)
      if (!base.count(s.name())) throw ProblemError("--set " + name + ": unresolved symbol '" + s.name() + "'", "", 0, 0);
    L.sets_[Expr::symbol(name)] = v;
  }
  P.substitutions = L.sets_;

  // point and atoms introduce their own symbols
  std::set<std::string> point_syms = base;
  if (j.contains("point")) {
    const json& pj = j["point"];
    L.check_keys(pj, "/point", std::set<std::string>(coords.begin(), coords.end()));
    PointSpec pt;
    for (const std::string& c : coords) {
      if (!pj.contains(c)) L.fail("point is missing coordinate '" + c + "'", "/point");
      std::set<std::string> any;
      Expr v;
      {
        ParseOptions saved = L.options_;
        L.options_.coordinates.clear();
        v = parse(pj[c].is_string() ? pj[c].get<std::string>() : pj[c].dump(), L.options_);
        L.options_ = saved;
      }
      ExprMap<bool> syms, fns;
      collect_atoms(v, syms, fns);
      for (const auto& [s, _] : syms) {
        if (L.options_.coordinates.count(s.name())) L.fail("point values may not use chart coordinates", "/point/" + c);
        any.insert(s.name());
      }
      point_syms.insert(any.begin(), any.end());
      Expr value = L.expr(pj[c], "/point/" + c, point_syms);
      pt.coords[Expr::symbol(c, SymbolRole::Coordinate)] = value;
    }
    if (j.contains("atoms")) {
      const json& aj = j["atoms"];
      if (!aj.is_object()) L.fail("expected an object", "/atoms");
      for (auto it = aj.begin(); it != aj.end(); ++it) point_syms.insert(it.key());
      for (auto it = aj.begin(); it != aj.end(); ++it) {
        const std::string ptr = "/atoms/" + escape_token(it.key());
        const Expr def = L.expr(it.value(), ptr, point_syms);
        if (!def.is(Kind::FnApp)) L.fail("atom definition must be a function value such as P(u0)", ptr);
        pt.atoms[def] = Expr::symbol(it.key());
      }
    }
    P.point = std::move(pt);
  } else if (j.contains("atoms")) {
    L.fail("'atoms' needs 'point'", "/atoms");
  }

  // assumptions: "expr > 0", "expr < 0", "expr != 0"
  std::set<std::string> any_names = point_syms;
  if (j.contains("assumptions")) {
    const json& aj = j["assumptions"];
    if (!aj.is_array()) L.fail("expected an array", "/assumptions");
    for (std::size_t i = 0; i < aj.size(); ++i) {
      const std::string ptr = "/assumptions/" + std::to_string(i);
      std::string s = L.string_at(aj[i], ptr);
      Sign sign;
      auto strip = [&](const std::string& suffix) {
        auto p = s.rfind(suffix);
        if (p == std::string::npos) return false;
        std::string rest = s.substr(p + suffix.size());
        for (char c : rest)
          if (c != ' ') return false;
        s = s.substr(0, p);
        return true;
      };
      if (strip(" > 0") || strip(">0")) sign = Sign::Positive;
      else if (strip(" < 0") || strip("<0")) sign = Sign::Negative;
      else if (strip(" != 0") || strip("!=0")) sign = Sign::Nonzero;
      else L.fail("assumption must read '<expr> > 0', '<expr> < 0' or '<expr> != 0'", ptr);
      const Expr e = L.expr(json(s), ptr, any_names);
      if (e.is_number()) {
        const Rational& v = e.number();
        const bool ok = sign == Sign::Positive ? v > 0 : sign == Sign::Negative ? v < 0 : v != 0;
        if (!ok) L.fail("assumption is false after --set", ptr);
        continue;
      }
      try {
        P.assumptions.declare(e, sign);
      } catch (const std::invalid_argument& err) {
        L.fail(err.what(), ptr);
      }
    }
  }
  if (P.point) P.point->assumptions = P.assumptions;

  if (!coords.empty()) {
    try {
      P.chart = make_chart(coords, P.assumptions);
    } catch (const std::invalid_argument& e) {
      L.fail(e.what(), "/coordinates");
    }
  }
  const std::size_t n = coords.size();

  if (j.contains("generators")) {
    const json& g = j["generators"];
    if (!g.is_array() || g.empty()) L.fail("expected a non-empty array of vector fields", "/generators");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string ptr = "/generators/" + std::to_string(i);
      if (!g[i].is_array() || g[i].size() != n) L.fail("generator needs " + std::to_string(n) + " components", ptr);
      std::vector<Expr> comps;
      for (std::size_t a = 0; a < n; ++a) comps.push_back(L.expr(g[i][a], ptr + "/" + std::to_string(a), base));
      P.generators.push_back(TensorField::vector(P.chart, comps));
    }
  }

  if (j.contains("structure_constants")) {
    const json& sc = j["structure_constants"];
    const std::string ptr = "/structure_constants";
    if (!sc.is_array() || sc.empty()) L.fail("expected an n×n×n array", ptr);
    const std::size_t m = sc.size();
    std::vector<Expr> c;
    for (std::size_t a = 0; a < m; ++a) {
      const std::string pa = ptr + "/" + std::to_string(a);
      if (!sc[a].is_array() || sc[a].size() != m) L.fail("expected " + std::to_string(m) + " rows", pa);
      for (std::size_t b = 0; b < m; ++b) {
        const std::string pb = pa + "/" + std::to_string(b);
        if (!sc[a][b].is_array() || sc[a][b].size() != m) L.fail("expected " + std::to_string(m) + " entries", pb);
        for (std::size_t cc = 0; cc < m; ++cc) c.push_back(L.expr(sc[a][b][cc], pb + "/" + std::to_string(cc), base));
      }
    }
    try {
      P.algebra = lie_algebra_from_constants(std::move(c), static_cast<int>(m), P.assumptions);
    } catch (const std::invalid_argument& e) {
      L.fail(e.what(), ptr);
    }
    if (j.contains("isotropy")) {
      const json& ij = j["isotropy"];
      if (!ij.is_array()) L.fail("expected an array of coefficient vectors", "/isotropy");
      for (std::size_t i = 0; i < ij.size(); ++i) {
        const std::string pi = "/isotropy/" + std::to_string(i);
        if (!ij[i].is_array() || ij[i].size() != m) L.fail("expected " + std::to_string(m) + " coefficients", pi);
        std::vector<Expr> v;
        for (std::size_t a = 0; a < m; ++a) v.push_back(L.expr(ij[i][a], pi + "/" + std::to_string(a), base));
        P.isotropy.push_back(std::move(v));
      }
    }
  } else if (j.contains("isotropy")) {
    L.fail("'isotropy' is computed from the generators; give it only with 'structure_constants'", "/isotropy");
  }

  if (j.contains("fiber")) {
    P.fiber = L.string_at(j["fiber"], "/fiber");
    if (P.fiber != "metric" && P.fiber != "scalar") L.fail("fiber must be 'metric' or 'scalar'", "/fiber");
  }
  if (j.contains("det_sign")) {
    if (!j["det_sign"].is_number_integer() || (j["det_sign"] != 1 && j["det_sign"] != -1))
      L.fail("det_sign must be 1 or -1", "/det_sign");
    P.det_sign = j["det_sign"].get<int>();
  }

  auto tensor = [&](const json& t, const std::string& ptr) {
    if (!P.chart) L.fail("tensor fields need 'coordinates'", ptr);
    L.check_keys(t, ptr, {"valence", "symmetry", "components", "wedge", "factor"});
    if (t.contains("wedge")) {
      if (P.generators.empty()) L.fail("'wedge' needs generators", ptr + "/wedge");
      const json& w = t["wedge"];
      if (!w.is_array() || w.empty()) L.fail("expected a list of generator numbers", ptr + "/wedge");
      std::vector<TensorField> f;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (!w[i].is_number_integer() || w[i].get<int>() < 1 || w[i].get<std::size_t>() > P.generators.size())
          L.fail("generator number out of range", ptr + "/wedge/" + std::to_string(i));
        f.push_back(P.generators[w[i].get<std::size_t>() - 1]);
      }
      TensorField out = f.size() == 1 ? f[0] : wedge(f);
      if (t.contains("factor")) out = scale(L.expr(t["factor"], ptr + "/factor", base), out);
      return out;
    }
    if (!t.contains("valence")) L.fail("tensor needs 'valence' or 'wedge'", ptr);
    const json& v = t["valence"];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
      L.fail("valence must be [r, s]", ptr + "/valence");
    const int up = v[0].get<int>(), down = v[1].get<int>();
    Symmetry sym = Symmetry::None;
    if (t.contains("symmetry")) {
      const std::string& s = L.string_at(t["symmetry"], ptr + "/symmetry");
      if (s == "symmetric") sym = Symmetry::Symmetric;
      else if (s == "antisymmetric") sym = Symmetry::Antisymmetric;
      else if (s != "none") L.fail("symmetry must be none, symmetric or antisymmetric", ptr + "/symmetry");
    }
    TensorField out;
    try {
      out = TensorField(P.chart, up, down, sym);
    } catch (const std::invalid_argument& e) {
      L.fail(e.what(), ptr);
    }
    if (t.contains("components")) {
      const json& c = t["components"];
      if (!c.is_object()) L.fail("expected an object of components", ptr + "/components");
      for (auto it = c.begin(); it != c.end(); ++it) {
        const std::string pc = ptr + "/components/" + escape_token(it.key());
        const Index idx = parse_index(it.key(), n, up + down, L, pc);
        try {
          out.set(idx, L.expr(it.value(), pc, base));
        } catch (const std::invalid_argument& e) {
          L.fail(e.what(), pc);
        }
      }
    }
    return out;
  };

  if (j.contains("ansatz")) {
    P.ansatz = tensor(j["ansatz"], "/ansatz");
    if (P.ansatz->up() != 0 || P.ansatz->down() != 2 || P.ansatz->symmetry() != Symmetry::Symmetric)
      L.fail("ansatz must be a symmetric (0,2) tensor", "/ansatz");
  }
  if (j.contains("chi")) {
    P.chi = tensor(j["chi"], "/chi");
    if (P.chi->down() != 0) L.fail("chi must be a multivector", "/chi");
  }

  if (j.contains("lagrangian")) {
    const json& lj = j["lagrangian"];
    if (lj.is_string()) {
      if (lj != "einstein_hilbert") L.fail("unknown Lagrangian '" + lj.get<std::string>() + "'", "/lagrangian");
      if (!P.ansatz) L.fail("einstein_hilbert needs an 'ansatz' metric", "/lagrangian");
      P.lagrangian = LagrangianKind::EinsteinHilbert;
    } else {
      L.check_keys(lj, "/lagrangian", {"density", "fields", "ansatz", "volume"});
      P.lagrangian = LagrangianKind::Density;
      if (!lj.contains("fields") || !lj["fields"].is_array()) L.fail("density Lagrangian needs 'fields'", "/lagrangian");
      std::set<std::string> jets = base;
      for (std::size_t i = 0; i < lj["fields"].size(); ++i) {
        const std::string& f = L.string_at(lj["fields"][i], "/lagrangian/fields/" + std::to_string(i));
        P.density_fields.push_back(f);
        jets.insert(f);
        for (std::size_t a = 0; a < n; ++a) {
          jets.insert(f + "_" + coords[a]);
          for (std::size_t b = 0; b < n; ++b) jets.insert(f + "_" + coords[a] + "_" + coords[b]);
        }
      }
      if (!lj.contains("density")) L.fail("density Lagrangian needs 'density'", "/lagrangian");
      {
        const ParseOptions saved = L.options_;
        for (const std::string& s : jets)
          if (!base.count(s)) L.options_.reduced_fields.insert(s);
        P.density = L.expr(lj["density"], "/lagrangian/density", jets);
        L.options_ = saved;
      }
      if (lj.contains("volume")) P.volume = L.expr(lj["volume"], "/lagrangian/volume", base);
      if (!lj.contains("ansatz") || !lj["ansatz"].is_object()) L.fail("density Lagrangian needs a field 'ansatz'", "/lagrangian");
      for (const std::string& f : P.density_fields) {
        if (!lj["ansatz"].contains(f)) L.fail("no ansatz for field '" + f + "'", "/lagrangian/ansatz");
        P.field_ansatz[Expr::symbol(f, SymbolRole::ReducedField)] =
            L.expr(lj["ansatz"][f], "/lagrangian/ansatz/" + escape_token(f), base);
      }
      L.check_keys(lj["ansatz"], "/lagrangian/ansatz", std::set<std::string>(P.density_fields.begin(), P.density_fields.end()));
    }
  }

  for (const std::string& q : qcoords) P.quotient.coords.push_back(Expr::symbol(q));
  if (j.contains("invariants")) {
    if (!j["invariants"].is_array()) L.fail("expected an array", "/invariants");
    for (std::size_t i = 0; i < j["invariants"].size(); ++i)
      P.quotient.invariants.push_back(L.expr(j["invariants"][i], "/invariants/" + std::to_string(i), base));
  }
  if (P.quotient.invariants.size() != P.quotient.coords.size())
    L.fail("'invariants' and 'quotient_coordinates' must have the same length", j.contains("invariants") ? "/invariants" : "");
  if (j.contains("slice")) {
    L.check_keys(j["slice"], "/slice", std::set<std::string>(coords.begin(), coords.end()));
    for (auto it = j["slice"].begin(); it != j["slice"].end(); ++it)
      P.quotient.slice[Expr::symbol(it.key(), SymbolRole::Coordinate)] =
          L.expr(it.value(), "/slice/" + escape_token(it.key()), base);
  }

  if (j.contains("pairings")) {
    const json& pj = j["pairings"];
    L.check_keys(pj, "/pairings", std::set<std::string>(P.reduced_fields.begin(), P.reduced_fields.end()));
    std::set<std::string> wsyms = base;
    wsyms.insert("det");
    for (const std::string& f : P.reduced_fields) {
      if (!pj.contains(f)) L.fail("missing pairing for reduced field '" + f + "'", "/pairings");
      const std::string ptr = "/pairings/" + escape_token(f);
      L.check_keys(pj[f], ptr, {"weight", "equation"});
      Pairing p;
      p.field = f;
      p.weight = pj[f].contains("weight") ? L.expr(pj[f]["weight"], ptr + "/weight", wsyms) : Expr(1);
      if (!pj[f].contains("equation")) L.fail("pairing needs 'equation' (a label or null)", ptr);
      if (!pj[f]["equation"].is_null()) p.equation = L.string_at(pj[f]["equation"], ptr + "/equation");
      P.pairings.push_back(std::move(p));
    }
  }

  if (j.contains("degree")) {
    if (!j["degree"].is_number_integer() || j["degree"].get<int>() < 0) L.fail("degree must be a non-negative integer", "/degree");
    P.degree = j["degree"].get<int>();
  }
  return P;
}

ProblemSpec load_problem(const std::string& path, const std::vector<std::pair<std::string, std::string>>& sets) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProblemError(path + ": cannot open problem file", "", 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str(), path, sets);
}

}  // namespace psc
