#include "cbnorm/json_io.hpp"

#include <fstream>
#include <sstream>

namespace cbnorm::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw InputError(where + ": " + msg);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number, got " + std::string(j.type_name()));
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    fail(where, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << source << ": malformed JSON at byte " << e.byte << ": " << e.what();
    throw InputError(os.str());
  }
}

json load(const std::string& path_or_inline) {
  const auto first = path_or_inline.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (path_or_inline[first] == '[' || path_or_inline[first] == '{'))
    return parse(path_or_inline, "inline JSON");
  std::ifstream in(path_or_inline);
  if (!in) throw InputError("cannot open " + path_or_inline);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path_or_inline);
}

Complex complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_object()) {
    const double re = number(field(j, "re", where), where + ".re");
    const double im = j.contains("im") ? number(j.at("im"), where + ".im") : 0.0;
    return {re, im};
  }
  if (j.is_array() && j.size() == 2) return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
  fail(where, "expected a number, {\"re\",\"im\"} or [re, im]");
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::vector<Complex> function_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of values");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(complex_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

json function_to_json(std::span<const Complex> f) {
  json out = json::array();
  for (const auto& z : f) out.push_back(complex_to_json(z));
  return out;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  if (j.is_object()) {
    const std::size_t rows = count(field(j, "rows", where), where + ".rows");
    const std::size_t cols = count(field(j, "cols", where), where + ".cols");
    ComplexMatrix m(rows, cols);
    auto fill = [&](const char* key, bool imag) {
      const json& part = field(j, key, where);
      const std::string w = where + "." + key;
      if (!part.is_array() || part.size() != rows) fail(w, "expected " + std::to_string(rows) + " rows");
      for (std::size_t r = 0; r < rows; ++r) {
        const std::string wr = w + "[" + std::to_string(r) + "]";
        if (!part[r].is_array() || part[r].size() != cols)
          fail(wr, "expected " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c) {
          const double v = number(part[r][c], wr + "[" + std::to_string(c) + "]");
          if (imag) {
            m(r, c).imag(v);
          } else {
            m(r, c).real(v);
          }
        }
      }
    };
    fill("re", false);
    if (j.contains("im")) fill("im", true);
    if (!m.all_finite()) fail(where, "non-finite entry");
    return m;
  }
  if (!j.is_array() || j.empty()) fail(where, "expected a matrix object or a nonempty list of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string wr = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols)
      fail(wr, "expected a row of " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[r][c], wr + "[" + std::to_string(c) + "]");
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json a = json::array(), b = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      a.push_back(m(r, c).real());
      b.push_back(m(r, c).imag());
    }
    re.push_back(std::move(a));
    im.push_back(std::move(b));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Carrier carrier_from_json(const json& j, const std::string& where) {
  const json& kind_j = field(j, "kind", where);
  if (!kind_j.is_string()) fail(where + ".kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  try {
    if (kind == "cyclic") return cyclic(count(field(j, "n", where), where + ".n"));
    if (kind == "dihedral") return dihedral(count(field(j, "n", where), where + ".n"));
    if (kind == "symmetric") return symmetric(count(field(j, "n", where), where + ".n"));
    if (kind == "product") {
      const json& of = field(j, "of", where);
      if (!of.is_array() || of.empty()) fail(where + ".of", "expected a nonempty list of groups");
      FiniteGroup g = group_from_json(of[0], where + ".of[0]");
      for (std::size_t k = 1; k < of.size(); ++k)
        g = direct_product(g, group_from_json(of[k], where + ".of[" + std::to_string(k) + "]"));
      return g;
    }
    if (kind == "table") {
      const json& t = field(j, "cayley", where);
      const std::string w = where + ".cayley";
      if (!t.is_array()) fail(w, "expected a list of rows");
      std::vector<std::vector<std::size_t>> table;
      for (std::size_t r = 0; r < t.size(); ++r) {
        if (!t[r].is_array()) fail(w + "[" + std::to_string(r) + "]", "expected a row");
        auto& row = table.emplace_back();
        for (std::size_t c = 0; c < t[r].size(); ++c)
          row.push_back(count(t[r][c], w + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
      }
      return FiniteGroup::from_cayley_table(std::move(table));
    }
    if (kind == "free_section")
      return FiniteSection(count(field(j, "gens", where), where + ".gens"),
                           count(field(j, "radius", where), where + ".radius"));
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(where, 0) == 0) throw;
    fail(where, msg);
  }
  fail(where + ".kind", "unknown group kind \"" + kind + "\"");
}

FiniteGroup group_from_json(const json& j, const std::string& where) {
  auto c = carrier_from_json(j, where);
  if (auto* g = std::get_if<FiniteGroup>(&c)) return std::move(*g);
  fail(where, "a finite group is required here, not a free-group section");
}

json report_to_json(const NormReport& r) {
  json out;
  out["norm"] = r.norm;
  out["gap"] = r.gap;
  out["residual"] = r.residual;
  out["status"] = sdp::to_string(r.status);
  out["iterations"] = r.iterations;
  out["primal_residual"] = r.check.primal_residual;
  out["dual_residual"] = r.check.dual_residual;
  out["primal_objective"] = r.check.primal_objective;
  out["dual_objective"] = r.check.dual_objective;
  if (r.witness) {
    auto rows = [](const ComplexMatrix& m) {
      json a = json::array();
      for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(function_to_json(m.row(i)));
      return a;
    };
    out["witness"] = {{"dim", r.witness->dim},
                      {"xi", rows(r.witness->xi)},
                      {"eta", rows(r.witness->eta)},
                      {"bound", r.witness->bound()}};
  }
  if (r.kernel) out["kernel"] = matrix_to_json(*r.kernel);
  if (!r.optimizer.empty()) out["optimizer"] = function_to_json(r.optimizer);
  if (r.lower_bound) out["lower_bound"] = true;
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

json comparison_to_json(const NormComparison& c) {
  return {{"relation", c.relation},
          {"source_norm", c.source.norm},
          {"image_norm", c.image.norm},
          {"tolerance", c.tolerance},
          {"holds", c.holds},
          {"source", report_to_json(c.source)},
          {"image", report_to_json(c.image)}};
}

}  // namespace cbnorm::io
