#ifndef NEVPICK_IO_HPP
#define NEVPICK_IO_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "nevpick/algebras.hpp"
#include "nevpick/core.hpp"
#include "nevpick/kernels.hpp"
#include "nevpick/polynomial.hpp"

namespace nevpick::io {

using json = nlohmann::ordered_json;

/// Malformed problem file; `path` names the offending field.
class FieldError : public InputError {
 public:
  FieldError(const std::string& path, const std::string& what)
      : InputError(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Options {
  int degree = 10;
  double tol = tol::kPsdRelative;
  std::uint64_t seed = 0;
  int samples = 20;
};

struct Problem {
  json raw;
  std::optional<KernelSpec> kernel;
  std::optional<Point> base;
  std::vector<Point> points;
  std::vector<Vector> directions;
  std::vector<cplx> targets;
  std::optional<double> t;
  std::optional<AlgebraPresentation> algebra;
  std::vector<Polynomial> corona_entries;
  std::optional<double> delta;
  std::optional<SubspaceFamilySpec> family;
  Options options;
  bool has_options_degree = false, has_options_tol = false, has_options_seed = false, has_options_samples = false;

  int dim() const {
    if (kernel) return kernel->dim;
    if (!points.empty()) return static_cast<int>(points.front().size());
    return 1;
  }
};

namespace detail {

inline std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
inline std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline double parse_real(const json& j, const std::string& path) {
  if (!j.is_number()) throw FieldError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw FieldError(path, "number must be finite");
  return v;
}

inline int parse_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw FieldError(path, "expected an integer");
  return j.get<int>();
}

inline cplx parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw FieldError(path, "expected a complex number as [re, im]");
  return {parse_real(j[0], at(path, 0)), parse_real(j[1], at(path, 1))};
}

inline Vector parse_cvector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw FieldError(path, "expected a non-empty list of [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i], at(path, i));
  return v;
}

inline std::vector<Point> parse_points(const json& j, const std::string& path) {
  if (!j.is_array()) throw FieldError(path, "expected a list of points");
  std::vector<Point> pts;
  for (std::size_t i = 0; i < j.size(); ++i) {
    pts.push_back(parse_cvector(j[i], at(path, i)));
    if (pts.back().size() != pts.front().size()) throw FieldError(at(path, i), "points must share one dimension");
  }
  return pts;
}

inline MultiIndex parse_index_key(const std::string& key, int d, const std::string& path) {
  MultiIndex a;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    int e = -1;
    try {
      e = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || part.empty() || e < 0) throw FieldError(path, "bad multi-index key '" + key + "'");
    a.push_back(e);
  }
  if (static_cast<int>(a.size()) != d)
    throw FieldError(path, "multi-index '" + key + "' has " + std::to_string(a.size()) + " entries, expected " +
                               std::to_string(d));
  return a;
}

inline Polynomial parse_polynomial(const json& j, int d, const std::string& path) {
  if (!j.is_object()) throw FieldError(path, "expected a coefficient map {\"i,j\": [re, im]}");
  Polynomial p(d);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string sub = at(path, it.key());
    p.add_term(parse_index_key(it.key(), d, sub), parse_complex(it.value(), sub));
  }
  return p;
}

inline std::vector<Polynomial> parse_polynomials(const json& j, int d, const std::string& path) {
  if (!j.is_array()) throw FieldError(path, "expected a list of coefficient maps");
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_polynomial(j[i], d, at(path, i)));
  return out;
}

inline void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw FieldError(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) throw FieldError(at(path, it.key()), "unknown field");
  }
}

}  // namespace detail

inline Problem parse_problem(const json& root) {
  using namespace detail;
  Problem p;
  p.raw = root;
  check_keys(root, "", {"kernel", "points", "data", "algebra", "corona", "family", "options"});

  if (root.contains("points")) p.points = parse_points(root["points"], "points");

  if (root.contains("kernel")) {
    const json& k = root["kernel"];
    check_keys(k, "kernel", {"type", "dim", "gram", "gram_points", "base"});
    if (!k.contains("type") || !k["type"].is_string()) throw FieldError("kernel.type", "expected a kernel type string");
    KernelKind kind;
    try {
      kind = parse_kernel_kind(k["type"].get<std::string>());
    } catch (const InputError& e) {
      throw FieldError("kernel.type", e.what());
    }
    int dim = k.contains("dim") ? parse_int(k["dim"], "kernel.dim") : (p.points.empty() ? 1 : int(p.points.front().size()));
    if (dim < 1) throw FieldError("kernel.dim", "dimension must be >= 1");
    try {
      switch (kind) {
        case KernelKind::Szego:
          if (dim != 1) throw FieldError("kernel.dim", "szego kernel is one-variable");
          p.kernel = KernelSpec::szego();
          break;
        case KernelKind::Dirichlet:
          if (dim != 1) throw FieldError("kernel.dim", "dirichlet kernel is one-variable");
          p.kernel = KernelSpec::dirichlet();
          break;
        case KernelKind::DruryArveson: p.kernel = KernelSpec::drury_arveson(dim); break;
        case KernelKind::ExplicitGram: {
          if (!k.contains("gram") || !k["gram"].is_array() || k["gram"].empty())
            throw FieldError("kernel.gram", "explicit_gram needs a square matrix of [re, im] pairs");
          const json& g = k["gram"];
          Matrix m(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
          for (std::size_t i = 0; i < g.size(); ++i) {
            const Vector row = parse_cvector(g[i], at("kernel.gram", i));
            if (row.size() != m.cols()) throw FieldError(at("kernel.gram", i), "gram matrix must be square");
            m.row(static_cast<Eigen::Index>(i)) = row.transpose();
          }
          std::vector<Point> gp;
          if (k.contains("gram_points")) gp = parse_points(k["gram_points"], "kernel.gram_points");
          else if (!p.points.empty()) gp = p.points;
          p.kernel = KernelSpec::explicit_gram(m, gp);
          break;
        }
      }
    } catch (const FieldError&) {
      throw;
    } catch (const InputError& e) {
      throw FieldError("kernel", e.what());
    }
    if (k.contains("base")) p.base = parse_cvector(k["base"], "kernel.base");
  }
  const int d = p.dim();
  for (std::size_t i = 0; i < p.points.size(); ++i)
    if (p.points[i].size() != d) throw FieldError(at("points", i), "point dimension does not match the kernel");
  if (p.kernel && p.kernel->kind == KernelKind::ExplicitGram && p.points.empty()) p.points = p.kernel->gram_points;

  if (root.contains("data")) {
    const json& dj = root["data"];
    check_keys(dj, "data", {"directions", "targets", "t"});
    if (dj.contains("targets")) {
      if (!dj["targets"].is_array()) throw FieldError("data.targets", "expected a list of [re, im] pairs");
      for (std::size_t i = 0; i < dj["targets"].size(); ++i)
        p.targets.push_back(parse_complex(dj["targets"][i], at("data.targets", i)));
      if (p.targets.size() != p.points.size())
        throw FieldError("data.targets", "expected one target per point (" + std::to_string(p.points.size()) + ")");
    }
    if (dj.contains("directions")) {
      const json& v = dj["directions"];
      if (!v.is_array()) throw FieldError("data.directions", "expected a list of complex vectors");
      for (std::size_t i = 0; i < v.size(); ++i) {
        p.directions.push_back(parse_cvector(v[i], at("data.directions", i)));
        if (p.directions.back().size() != p.directions.front().size())
          throw FieldError(at("data.directions", i), "directions must share one length");
        if (p.directions.back().norm() == 0.0) throw FieldError(at("data.directions", i), "direction must be nonzero");
      }
      if (p.directions.size() != p.points.size())
        throw FieldError("data.directions", "expected one direction per point (" + std::to_string(p.points.size()) + ")");
    }
    if (dj.contains("t")) {
      p.t = parse_real(dj["t"], "data.t");
      if (*p.t <= 0.0) throw FieldError("data.t", "t must be positive");
    }
  }

  if (root.contains("algebra")) {
    const json& a = root["algebra"];
    check_keys(a, "algebra", {"form", "generators"});
    const std::string form = a.contains("form") && a["form"].is_string() ? a["form"].get<std::string>() : "";
    std::vector<Polynomial> gens;
    if (a.contains("generators")) gens = parse_polynomials(a["generators"], d, "algebra.generators");
    if (form == "full") p.algebra = AlgebraPresentation::full(d);
    else if (form == "unital") p.algebra = AlgebraPresentation::unital(d, gens);
    else if (form == "constants_plus_ideal") p.algebra = AlgebraPresentation::constants_plus_ideal(d, gens);
    else throw FieldError("algebra.form", "expected \"full\", \"unital\" or \"constants_plus_ideal\"");
  }

  if (root.contains("corona")) {
    const json& c = root["corona"];
    check_keys(c, "corona", {"entries", "delta"});
    if (!c.contains("entries")) throw FieldError("corona.entries", "missing");
    p.corona_entries = parse_polynomials(c["entries"], d, "corona.entries");
    if (p.corona_entries.empty()) throw FieldError("corona.entries", "need at least one entry");
    if (c.contains("delta")) {
      p.delta = parse_real(c["delta"], "corona.delta");
      if (*p.delta <= 0.0) throw FieldError("corona.delta", "delta must be positive");
    }
  }

  if (root.contains("family")) {
    const json& f = root["family"];
    check_keys(f, "family", {"variant", "count", "seed", "scale", "vectors", "complement", "resolution"});
    if (!f.contains("variant") || !f["variant"].is_string()) throw FieldError("family.variant", "expected a string");
    SubspaceFamilySpec s;
    try {
      s.variant = parse_family_variant(f["variant"].get<std::string>());
    } catch (const InputError& e) {
      throw FieldError("family.variant", e.what());
    }
    if (f.contains("count")) s.count = parse_int(f["count"], "family.count");
    if (f.contains("seed")) {
      if (!f["seed"].is_number_unsigned()) throw FieldError("family.seed", "expected a non-negative integer");
      s.seed = f["seed"].get<std::uint64_t>();
    }
    if (f.contains("scale")) s.scale = parse_real(f["scale"], "family.scale");
    if (f.contains("vectors")) s.vectors = parse_polynomials(f["vectors"], d, "family.vectors");
    if (f.contains("complement")) s.complement = parse_polynomials(f["complement"], d, "family.complement");
    if (f.contains("resolution")) s.resolution = parse_int(f["resolution"], "family.resolution");
    try {
      s.validate();
    } catch (const InputError& e) {
      throw FieldError("family", e.what());
    }
    p.family = s;
  }

  if (root.contains("options")) {
    const json& o = root["options"];
    check_keys(o, "options", {"degree", "tol", "seed", "samples"});
    if (o.contains("degree")) {
      p.options.degree = parse_int(o["degree"], "options.degree");
      if (p.options.degree < 0) throw FieldError("options.degree", "must be >= 0");
      p.has_options_degree = true;
    }
    if (o.contains("tol")) {
      p.options.tol = parse_real(o["tol"], "options.tol");
      if (p.options.tol <= 0.0) throw FieldError("options.tol", "must be positive");
      p.has_options_tol = true;
    }
    if (o.contains("seed")) {
      if (!o["seed"].is_number_unsigned()) throw FieldError("options.seed", "expected a non-negative integer");
      p.options.seed = o["seed"].get<std::uint64_t>();
      p.has_options_seed = true;
    }
    if (o.contains("samples")) {
      p.options.samples = parse_int(o["samples"], "options.samples");
      if (p.options.samples < 0) throw FieldError("options.samples", "must be >= 0");
      p.has_options_samples = true;
    }
  }
  return p;
}

inline Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file '" + path + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FieldError("(file)", std::string("not valid JSON: ") + e.what());
  }
  return parse_problem(root);
}

//
// Output helpers
//

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(to_json(m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline json to_json(const Polynomial& p) {
  json o = json::object();
  for (const auto& [a, c] : p.terms()) o[index_key(a)] = to_json(c);
  return o;
}

inline json to_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// JSON text with every float printed to 17 significant digits.
inline void dump(const json& j, std::ostream& os, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string pad2(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        break;
      }
      os << "{\n";
      std::size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        os << pad2 << json(it.key()).dump() << ": ";
        dump(it.value(), os, indent + 2);
        os << (k + 1 < j.size() ? ",\n" : "\n");
      }
      os << pad << "}";
      break;
    }
    case json::value_t::array: {
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      bool pairs = true;
      for (const auto& e : j) pairs = pairs && e.is_array() && e.size() == 2 && !e[0].is_structured();
      if (j.empty()) {
        os << "[]";
      } else if (flat || pairs) {
        os << "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) os << ", ";
          dump(j[k], os, indent + 2);
        }
        os << "]";
      } else {
        os << "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
          os << pad2;
          dump(j[k], os, indent + 2);
          os << (k + 1 < j.size() ? ",\n" : "\n");
        }
        os << pad << "]";
      }
      break;
    }
    case json::value_t::number_float: os << format_number(j.get<double>()); break;
    default: os << j.dump(); break;
  }
}

inline std::string dump(const json& j) {
  std::ostringstream os;
  dump(j, os);
  os << "\n";
  return os.str();
}

}  // namespace nevpick::io

#endif  // NEVPICK_IO_HPP
