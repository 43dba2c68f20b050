#include "cbnorm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "cbnorm/acceptance.hpp"
#include "cbnorm/functorial.hpp"
#include "cbnorm/harmonic.hpp"
#include "cbnorm/json_io.hpp"
#include "cbnorm/predual.hpp"

namespace cbnorm::cli {

namespace {

using io::json;

struct Common {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iters = 200;
  std::uint64_t seed = 0;
  std::string output;

  sdp::Tolerances tol() const { return {gap_tol, feas_tol, max_iters}; }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--gap-tol", c.gap_tol, "relative duality gap tolerance")->check(CLI::PositiveNumber);
  app->add_option("--feas-tol", c.feas_tol, "relative feasibility tolerance")->check(CLI::PositiveNumber);
  app->add_option("--max-iters", c.max_iters, "interior point iteration limit")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "seed for randomized oracles");
  app->add_option("--output", c.output, "write the JSON result to this file");
}

std::vector<Complex> values(const std::string& arg, const std::string& what) {
  return io::function_from_json(io::load(arg), what);
}

std::vector<Element> element_list(const std::string& arg, const std::string& what) {
  const json j = io::load(arg);
  if (!j.is_array()) throw InputError(what + ": expected a list of elements");
  std::vector<Element> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number_integer() || j[k].get<long long>() < 0)
      throw InputError(what + "[" + std::to_string(k) + "]: expected an element label");
    out.push_back(j[k].get<Element>());
  }
  return out;
}

// A family name ("decay:0.5"), or JSON mapping words to values.
WordFunction word_values(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t");
  const bool json_like = first != std::string::npos && arg[first] == '{';
  if (!json_like && !std::filesystem::exists(arg)) return word_family(arg);
  const json j = io::load(arg);
  if (!j.is_object()) throw InputError("--u: expected a family name or an object mapping words to values");
  std::map<Word, Complex> table;
  for (const auto& [k, v] : j.items()) table[Word::parse(k)] = io::complex_from_json(v, "--u." + k);
  return word_table(std::move(table));
}

std::pair<std::size_t, std::size_t> radius_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    std::size_t pos = 0;
    if (dots == std::string::npos) {
      const auto r = std::stoul(s, &pos);
      if (pos == s.size()) return {r, r};
    } else {
      const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
      std::size_t pa = 0, pb = 0;
      const auto lo = std::stoul(a, &pa), hi = std::stoul(b, &pb);
      if (pa == a.size() && pb == b.size() && lo <= hi) return {lo, hi};
    }
  } catch (const std::exception&) {
  }
  throw InputError("--radius: expected k or a..b, got '" + s + "'");
}

std::vector<int> criteria_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      const int id = std::stoi(tok, &pos);
      if (pos == tok.size() && id >= 1 && id <= acceptance::kCriteria) {
        out.push_back(id);
        continue;
      }
    } catch (const std::exception&) {
    }
    throw InputError("--criteria: bad criterion '" + tok + "'");
  }
  return out;
}

Subgroup subgroup_arg(const FiniteGroup& g, const std::string& elements, const std::string& gens) {
  if (!elements.empty() == !gens.empty()) throw InputError("give exactly one of --subgroup and --gens");
  if (!gens.empty()) return make_subgroup(g, subgroup_closure(g, element_list(gens, "--gens")));
  return make_subgroup(g, element_list(elements, "--subgroup"));
}

json error_doc(const std::string& msg) { return {{"error", msg}}; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schur and Herz-Schur multiplier norms by semidefinite programming", "cbnorm"};
  app.require_subcommand(1);
  Common common;
  std::function<json()> action;
  bool table_output = false;

  // schur-norm
  std::string symbol_path, matrix_path, method = "max";
  auto* sn = app.add_subcommand("schur-norm", "Schur multiplier norm of a symbol, with witness");
  sn->add_option("symbol", symbol_path, "symbol matrix (JSON file or inline)")->required();
  add_common(sn, common);
  sn->callback([&] {
    action = [&] { return io::report_to_json(schur_norm(io::matrix_from_json(io::load(symbol_path), "symbol"), common.tol())); };
  });

  auto* sa = app.add_subcommand("schur-apply", "Entrywise product of a symbol and a matrix");
  sa->add_option("symbol", symbol_path)->required();
  sa->add_option("matrix", matrix_path)->required();
  add_common(sa, common);
  sa->callback([&] {
    action = [&] {
      const auto u = io::matrix_from_json(io::load(symbol_path), "symbol");
      const auto x = io::matrix_from_json(io::load(matrix_path), "matrix");
      return json{{"result", io::matrix_to_json(schur_apply(u, x))}};
    };
  });

  auto* pn = app.add_subcommand("predual-norm", "Norm of a matrix as a functional on Schur multipliers");
  pn->add_option("mu", matrix_path)->required();
  pn->add_option("--method", method, "max (over the Schur ball) or factored")
      ->check(CLI::IsMember({"max", "factored"}));
  add_common(pn, common);
  pn->callback([&] {
    action = [&] {
      const auto mu = io::matrix_from_json(io::load(matrix_path), "mu");
      return io::report_to_json(method == "factored" ? haagerup_predual_norm_factored(mu, common.tol())
                                                     : haagerup_predual_norm(mu, common.tol()));
    };
  });

  // group commands
  std::string group, u_arg, f_arg, subgroup, gens, normal, source, target, images;
  bool verify = false;

  auto* cb = app.add_subcommand("cb-norm", "Multiplier norm on a finite group or free-group section");
  cb->add_option("--group", group, "group spec")->required();
  cb->add_option("--u", u_arg, "values, or a word family for sections")->required();
  add_common(cb, common);
  cb->callback([&] {
    action = [&] {
      const auto carrier = io::carrier_from_json(io::load(group), "--group");
      json doc;
      std::size_t dim = 0;
      if (const auto* g = std::get_if<FiniteGroup>(&carrier)) {
        doc = io::report_to_json(cb_norm(*g, values(u_arg, "--u"), common.tol()));
        dim = g->order();
      } else {
        const auto& f = std::get<FiniteSection>(carrier);
        doc = io::report_to_json(cb_norm(f, word_values(u_arg), common.tol()));
        dim = f.size();
      }
      doc["schur_matrix"] = {{"rows", dim}, {"cols", dim}};
      return doc;
    };
  });

  auto* an = app.add_subcommand("a-norm", "Fourier algebra norm on a finite group");
  an->add_option("--group", group)->required();
  an->add_option("--u", u_arg)->required();
  add_common(an, common);
  an->callback([&] {
    action = [&] {
      const auto g = io::group_from_json(io::load(group), "--group");
      return io::report_to_json(a_norm(g, values(u_arg, "--u"), common.tol()));
    };
  });

  std::string q_method = "dual";
  auto* qn = app.add_subcommand("q-norm", "Norm in the standard predual");
  qn->add_option("--group", group)->required();
  qn->add_option("--f", f_arg)->required();
  qn->add_option("--method", q_method, "dual or primal")->check(CLI::IsMember({"dual", "primal"}));
  add_common(qn, common);
  qn->callback([&] {
    action = [&] {
      const auto g = io::group_from_json(io::load(group), "--group");
      const auto f = values(f_arg, "--f");
      return io::report_to_json(q_method == "primal" ? q_norm_primal(g, f, common.tol())
                                                     : q_norm(g, f, common.tol()));
    };
  });

  auto* cs = app.add_subcommand("cstar-norm", "Norm of convolution by f on l2(G)");
  cs->add_option("--group", group)->required();
  cs->add_option("--f", f_arg)->required();
  add_common(cs, common);
  cs->callback([&] {
    action = [&] {
      const auto g = io::group_from_json(io::load(group), "--group");
      return json{{"norm", c_star_norm(g, values(f_arg, "--f"))}};
    };
  });

  auto* pa = app.add_subcommand("pairing", "sum over s of u(s) f(s)");
  pa->add_option("--group", group, "optional; checks the lengths against the group order");
  pa->add_option("--u", u_arg)->required();
  pa->add_option("--f", f_arg)->required();
  add_common(pa, common);
  pa->callback([&] {
    action = [&] {
      const auto u = values(u_arg, "--u"), f = values(f_arg, "--f");
      if (!group.empty()) {
        const auto g = io::group_from_json(io::load(group), "--group");
        if (u.size() != g.order()) throw InputError("--u: length does not match the group order");
      }
      return json{{"value", io::complex_to_json(pairing(u, f))}};
    };
  });

  std::size_t free_gens = 2;
  std::string radius = "1..3";
  auto* se = app.add_subcommand("sections", "Lower bounds over nested free-group balls");
  se->add_option("--free", free_gens, "number of free generators")->check(CLI::PositiveNumber);
  se->add_option("--radius", radius, "k or a..b");
  se->add_option("--u", u_arg, "word family or JSON table")->required();
  add_common(se, common);
  se->callback([&] {
    action = [&] {
      const auto [lo, hi] = radius_range(radius);
      std::vector<FiniteSection> sections;
      for (std::size_t k = lo; k <= hi; ++k) sections.emplace_back(free_gens, k);
      const auto reports = cb_norm_sections(sections, word_values(u_arg), common.tol());
      json list = json::array();
      bool monotone = true;
      for (std::size_t k = 0; k < reports.size(); ++k) {
        if (k > 0 && reports[k].norm < reports[k - 1].norm - 1e-7) monotone = false;
        list.push_back({{"radius", sections[k].radius()},
                        {"size", sections[k].size()},
                        {"report", io::report_to_json(reports[k])}});
      }
      return json{{"generators", free_gens}, {"sections", std::move(list)}, {"nondecreasing", monotone}};
    };
  });

  auto* re = app.add_subcommand("restrict", "Restrict a multiplier to a subgroup");
  re->add_option("--group", group)->required();
  re->add_option("--subgroup", subgroup, "subgroup elements");
  re->add_option("--gens", gens, "subgroup generators");
  re->add_option("--u", u_arg)->required();
  re->add_flag("--verify", verify, "compare multiplier norms on both sides");
  add_common(re, common);
  re->callback([&] {
    action = [&] {
      const auto g = io::group_from_json(io::load(group), "--group");
      const auto h = subgroup_arg(g, subgroup, gens);
      const auto u = values(u_arg, "--u");
      json doc{{"subgroup", h.elements}, {"u", io::function_to_json(restrict(u, h))}};
      if (verify) doc["verification"] = io::comparison_to_json(verify_restrict(u, h, 1e-5, common.tol()));
      return doc;
    };
  });

  auto* ex = app.add_subcommand("extend", "Extend a multiplier on a subgroup by zero");
  ex->add_option("--group", group)->required();
  ex->add_option("--subgroup", subgroup);
  ex->add_option("--gens", gens);
  ex->add_option("--u", u_arg, "values on the subgroup, in ascending element order")->required();
  ex->add_flag("--verify", verify);
  add_common(ex, common);
  ex->callback([&] {
    action = [&] {
      const auto g = io::group_from_json(io::load(group), "--group");
      const auto h = subgroup_arg(g, subgroup, gens);
      const auto u = values(u_arg, "--u");
      json doc{{"subgroup", h.elements}, {"u", io::function_to_json(extend_zero(u, h))}};
      if (verify) doc["verification"] = io::comparison_to_json(verify_extend(u, h, 1e-4, common.tol()));
      return doc;
    };
  });

  auto* li = app.add_subcommand("lift", "Lift a multiplier from a quotient group");
  li->add_option("--group", group)->required();
  li->add_option("--normal", normal, "normal subgroup elements")->required();
  li->add_option("--u", u_arg, "values on the cosets, numbered by first appearance")->required();
  li->add_flag("--verify", verify);
  add_common(li, common);
  li->callback([&] {
    action = [&] {
      const auto g = io::group_from_json(io::load(group), "--group");
      const auto q = quotient(g, element_list(normal, "--normal"));
      const auto u = values(u_arg, "--u");
      json doc{{"representatives", q.representatives},
               {"projection", q.projection.table()},
               {"u", io::function_to_json(lift_from_quotient(u, q))}};
      if (verify) doc["verification"] = io::comparison_to_json(verify_lift(u, q, 1e-4, common.tol()));
      return doc;
    };
  });

  auto* pb = app.add_subcommand("pullback", "Compose a multiplier with a homomorphism");
  pb->add_option("--source", source, "source group spec")->required();
  pb->add_option("--target", target, "target group spec")->required();
  pb->add_option("--gens", gens, "generators of the source")->required();
  pb->add_option("--images", images, "their images in the target")->required();
  pb->add_option("--u", u_arg, "values on the target")->required();
  pb->add_flag("--verify", verify);
  add_common(pb, common);
  pb->callback([&] {
    action = [&] {
      auto src = io::group_from_json(io::load(source), "--source");
      auto tgt = io::group_from_json(io::load(target), "--target");
      const auto gs = element_list(gens, "--gens"), im = element_list(images, "--images");
      const auto sigma = GroupHomomorphism::from_generators(std::move(src), std::move(tgt), gs, im);
      const auto u = values(u_arg, "--u");
      json doc{{"map", sigma.table()}, {"u", io::function_to_json(pullback(u, sigma))}};
      if (verify) doc["verification"] = io::comparison_to_json(verify_pullback(u, sigma, 1e-4, common.tol()));
      return doc;
    };
  });

  std::string suite = "primary", criteria;
  bool as_json = false;
  auto* ac = app.add_subcommand("acceptance", "Run the acceptance suite");
  ac->add_option("--suite", suite)->check(CLI::IsMember({"primary"}));
  ac->add_option("--criteria", criteria, "comma-separated criterion ids");
  ac->add_flag("--json", as_json, "print a JSON document instead of a table");
  add_common(ac, common);
  ac->callback([&] {
    table_output = !as_json;
    action = [&] {
      acceptance::Config cfg;
      cfg.tol = common.tol();
      cfg.seed = common.seed;
      if (!criteria.empty()) cfg.only = criteria_list(criteria);
      if (const char* t = std::getenv("CBNORM_THREADS")) cfg.threads = static_cast<unsigned>(std::max(1, std::atoi(t)));
      json rows = json::array();
      bool all = true;
      for (const auto& r : acceptance::run(cfg)) {
        all = all && r.pass;
        rows.push_back({{"id", r.id},
                        {"name", r.name},
                        {"pass", r.pass},
                        {"measured", r.measured},
                        {"target", r.target},
                        {"tolerance", r.tolerance},
                        {"seconds", r.seconds},
                        {"detail", r.detail},
                        {"line", acceptance::format_line(r)}});
      }
      return json{{"suite", suite}, {"seed", cfg.seed}, {"all_pass", all}, {"criteria", std::move(rows)}};
    };
  });

  auto emit = [&](const json& doc) {
    std::string text;
    if (table_output && doc.contains("criteria")) {
      for (const auto& r : doc["criteria"]) text += r["line"].get<std::string>() + "\n";
      text += doc["all_pass"].get<bool>() ? "all criteria passed\n" : "some criteria FAILED\n";
    } else {
      text = doc.dump(2) + "\n";
    }
    if (common.output.empty()) {
      out << text;
    } else {
      std::ofstream f(common.output);
      if (!f) throw InputError("cannot write " + common.output);
      f << text;
    }
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    out << error_doc(e.what()).dump(2) << "\n";
    return 2;
  }
  if (!action) {
    out << error_doc("no command given").dump(2) << "\n";
    return 2;
  }
  try {
    emit(action());
    return 0;
  } catch (const sdp::SolverError& e) {
    out << json{{"error", e.what()}, {"status", sdp::to_string(e.status())}}.dump(2) << "\n";
    return 1;
  } catch (const InputError& e) {
    out << error_doc(e.what()).dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "unexpected failure: " << e.what() << "\n";
    out << error_doc(e.what()).dump(2) << "\n";
    return 1;
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace cbnorm::cli
