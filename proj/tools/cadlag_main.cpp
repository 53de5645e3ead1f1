#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cadlag/csv.hpp"
#include "cadlag/fixtures.hpp"
#include "cadlag/json_io.hpp"
#include "cadlag/verify.hpp"

using namespace cadlag;
using nlohmann::json;

namespace {

// Words on the command line use the letters of the path the functional sees:
// for tracking-extended paths letter 0 is the auxiliary component and 1..d are
// the original components. ito/taylor/derive/uat extend bare paths themselves.

struct FunctionalSpec {
  std::string name = "linear-sig";
  std::string u_word;
  std::string u_file;
};

TruncatedTensor functional_tensor(const FunctionalSpec& spec, int d) {
  if (!spec.u_file.empty()) {
    std::ifstream in(spec.u_file);
    if (!in) throw std::runtime_error("cannot open " + spec.u_file);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return tensor_from_json(text);
  }
  Word w = parse_word(spec.u_word);
  int level = std::max<int>(1, static_cast<int>(w.size()));
  return TruncatedTensor::basis(d, level, w);
}

PathFunctional make_functional(const FunctionalSpec& spec, int d) {
  if (spec.name == "linear-sig") return linear_sig(functional_tensor(spec, d));
  if (spec.name == "levy-area") {
    if (d < 3) throw std::runtime_error("levy-area expects an extended path (letters 1,2)");
    return levy_area(1, 2, d);
  }
  if (spec.name == "sup-norm") return sup_norm();
  if (spec.name == "sin-time") return sin_time(d);
  if (spec.name == "compose-sin") return compose(Smooth::sin, functional_tensor(spec, d));
  if (spec.name == "compose-square") return compose(Smooth::square, functional_tensor(spec, d));
  if (spec.name == "compose-exp") return compose(Smooth::exp, functional_tensor(spec, d));
  if (spec.name == "compose-id") return compose(Smooth::identity, functional_tensor(spec, d));
  if (spec.name == "raw-levy") {
    if (d < 3) throw std::runtime_error("raw-levy expects an extended path (letters 1,2)");
    return raw_levy(1, 2);
  }
  throw std::runtime_error("unknown functional: " + spec.name);
}

GroupPath ensure_extended(GroupPath x) {
  if (x.time_extended()) return x;
  return tracking_jumps_extend(x);
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write " + out);
    os << text;
  }
}

std::string ito_report_json(const ItoReport& rep, double tol, bool pass) {
  json j;
  j["t"] = rep.t;
  j["lhs"] = rep.lhs;
  j["integral"] = rep.integral;
  j["compensator"] = rep.compensator;
  j["residual"] = rep.residual;
  j["observed_order"] = rep.observed_order;
  j["converged"] = rep.converged;
  j["non_convergent"] = rep.non_convergent;
  j["mesh"] = rep.mesh;
  j["integral_per_mesh"] = rep.integral_per_mesh;
  j["residual_per_mesh"] = rep.residual_per_mesh;
  j["tolerance"] = tol;
  j["pass"] = pass;
  return j.dump(2) + "\n";
}

std::string convergence_csv(const IntegralResult& r) {
  CsvWriter csv({"mesh", "value", "richardson", "diff"});
  for (std::size_t i = 0; i < r.mesh.size(); ++i) {
    double rich = i > 0 ? 2.0 * r.value[i] - r.value[i - 1] : r.value[i];
    double diff = i > 0 ? r.value[i] - r.value[i - 1] : 0.0;
    csv.row_numeric({r.mesh[i], r.value[i], rich, diff});
  }
  return csv.text();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"cadlag rough-path calculus: signatures, Marcus transforms, functional Ito/Taylor checks"};
  app.require_subcommand(1);

  std::string path_file, out_file, out_dir = "fixtures";
  FunctionalSpec fspec;
  double t = 1.0, tol = 1e-6, pvar = 2.5;
  int N = 3, K = 4, grid = 21, levels = 12, depth = 14, depth_first = 4, depth_last = 10;
  std::string word, fit_levels = "2,4,6";
  bool no_extend = false, literal = false;

  auto add_path_opt = [&](CLI::App* cmd, bool required = true) {
    auto* o = cmd->add_option("--path", path_file, "path JSON file");
    if (required) o->required();
  };
  auto add_fn_opts = [&](CLI::App* cmd) {
    cmd->add_option("--functional", fspec.name,
                    "linear-sig | levy-area | sup-norm | sin-time | compose-{sin,square,exp,id} | raw-levy");
    cmd->add_option("--u", fspec.u_word, "basis word for linear-sig/compose, e.g. \"(1,2)\"");
    cmd->add_option("--u-file", fspec.u_file, "tensor JSON for general coefficients");
    cmd->add_flag("--no-extend", no_extend, "do not tracking-extend a bare path");
  };

  auto* sig_cmd = app.add_subcommand("sig", "dump signature coefficients over a time grid as CSV");
  add_path_opt(sig_cmd);
  sig_cmd->add_option("--N", N, "truncation level");
  sig_cmd->add_option("--grid", grid, "number of grid points");
  sig_cmd->add_option("--out", out_file, "output file (default stdout)");

  auto* int_cmd = app.add_subcommand("integrate", "Young or rough integral with a convergence table");
  add_path_opt(int_cmd);
  add_fn_opts(int_cmd);
  std::string kind = "young";
  int_cmd->add_option("--kind", kind, "young | rough");
  int_cmd->add_option("--t", t, "upper limit");
  int_cmd->add_option("--levels", levels, "mesh levels (halving from 1/16)");
  int_cmd->add_option("--out", out_file, "output file (default stdout)");

  auto* derive_cmd = app.add_subcommand("derive", "vertical derivative in a direction word");
  add_path_opt(derive_cmd);
  add_fn_opts(derive_cmd);
  derive_cmd->add_option("--word", word, "direction word, e.g. \"(1,2)\"")->required();
  derive_cmd->add_option("--t", t, "time");
  derive_cmd->add_flag("--literal", literal, "use the nested Marcus construction");
  derive_cmd->add_option("--out", out_file, "JSON report file (default stdout)");

  auto* ito_cmd = app.add_subcommand("ito", "functional Ito formula check");
  add_path_opt(ito_cmd);
  add_fn_opts(ito_cmd);
  int level = 1;
  ito_cmd->add_option("--level", level, "1 (Young) or 2 (rough)");
  ito_cmd->add_option("--t", t, "time");
  ito_cmd->add_option("--levels", levels, "mesh levels");
  ito_cmd->add_option("--tol", tol, "residual tolerance");
  ito_cmd->add_option("--out", out_file, "JSON report file (default stdout)");

  auto* taylor_cmd = app.add_subcommand("taylor", "signature Taylor expansion check");
  add_path_opt(taylor_cmd, false);
  add_fn_opts(taylor_cmd);
  taylor_cmd->add_option("--K", K, "expansion order");
  taylor_cmd->add_option("--t", t, "time");
  taylor_cmd->add_option("--tol", tol, "defect tolerance");
  taylor_cmd->add_option("--out", out_file, "JSON report file (default stdout)");

  auto* qv_cmd = app.add_subcommand("qv", "Foellmer quadratic variation along dyadic partitions");
  add_path_opt(qv_cmd);
  qv_cmd->add_option("--depth", depth, "finest dyadic depth");
  qv_cmd->add_option("--t", t, "time");
  qv_cmd->add_option("--out", out_file, "output file (default stdout)");

  auto* rie_cmd = app.add_subcommand("rie", "verify the RIE property clauses");
  add_path_opt(rie_cmd);
  rie_cmd->add_option("--p", pvar, "variation exponent in (2,3)");
  rie_cmd->add_option("--depth-first", depth_first, "first dyadic depth");
  rie_cmd->add_option("--depth-last", depth_last, "last dyadic depth");
  rie_cmd->add_option("--out", out_file, "output file (default stdout)");

  auto* uat_cmd = app.add_subcommand("uat", "signature regression of a functional");
  add_path_opt(uat_cmd);
  add_fn_opts(uat_cmd);
  uat_cmd->add_option("--levels", fit_levels, "comma-separated feature levels");
  uat_cmd->add_option("--grid", grid, "grid points");
  uat_cmd->add_option("--out", out_file, "output file (default stdout)");

  auto* fix_cmd = app.add_subcommand("fixtures", "write the canonical fixture paths");
  fix_cmd->add_option("--dir", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sig_cmd->parsed()) {
      GroupPath x = load_path(path_file);
      SignaturePath s(x, N);
      // dash-joined words keep the CSV free of embedded commas
      auto csv_word = [](const Word& w) {
        std::string out = "(";
        for (std::size_t i = 0; i < w.size(); ++i) {
          if (i) out += "-";
          out += std::to_string(w[i]);
        }
        return out + ")";
      };
      CsvWriter csv({"t", "word", "value"});
      for (int i = 0; i < grid; ++i) {
        double ti = grid == 1 ? 1.0 : static_cast<double>(i) / (grid - 1);
        GroupElement g = s.eval(ti);
        for (int k = 0; k <= N; ++k) {
          for (std::int64_t r = 0; r < level_size(x.d(), k); ++r) {
            Word w = word_from_rank(x.d(), k, r);
            csv.row({format_double(ti), csv_word(w),
                     format_double(g.tensor().coeffs[static_cast<std::size_t>(level_offset(x.d(), k) + r)])});
          }
        }
      }
      emit(csv.text(), out_file);
      return 0;
    }

    if (int_cmd->parsed()) {
      GroupPath x = load_path(path_file);
      GroupPath xe = no_extend ? x : ensure_extended(x);
      MeshSchedule sched{1.0 / 16, levels, 1e-9};
      IntegralResult r;
      if (kind == "young") {
        PathFunctional f = make_functional(fspec, xe.d());
        auto pp = std::make_shared<PreparedPath>(xe);
        Covector y = [f, pp](double s) { return gradient(f, 1, s, *pp); };
        r = young_integral(y, xe, t, sched);
      } else if (kind == "rough") {
        GroupPath x2 = xe.level() == 2 ? xe : lift_to_level(xe, 2);
        PathFunctional f = make_functional(fspec, x2.d());
        auto pp = std::make_shared<PreparedPath>(x2);
        ControlledPath cp;
        cp.y = [f, pp](double s) { return gradient(f, 1, s, *pp); };
        cp.y_prime = [f, pp](double s) { return gradient(f, 2, s, *pp); };
        r = rough_integral(cp, x2, t, sched);
      } else {
        throw std::runtime_error("unknown kind: " + kind);
      }
      emit(convergence_csv(r), out_file);
      return r.non_convergent ? 1 : 0;
    }

    if (derive_cmd->parsed()) {
      GroupPath x = load_path(path_file);
      GroupPath xe = no_extend ? x : ensure_extended(x);
      PathFunctional f = make_functional(fspec, xe.d());
      PerturbationPlan plan = PerturbationPlan::for_word(parse_word(word));
      plan.literal_marcus = literal;
      double fd = vertical_derivative(f, t, xe, plan);
      json j;
      j["word"] = word;
      j["t"] = t;
      j["finite_difference"] = fd;
      if (f.closed_derivative &&
          static_cast<int>(plan.directions.size()) <= f.closed_derivative_order) {
        PreparedPath pp(xe);
        j["closed_form"] = f.closed_derivative(plan.directions, t, pp);
      }
      emit(j.dump(2) + "\n", out_file);
      return 0;
    }

    if (ito_cmd->parsed()) {
      GroupPath x = load_path(path_file);
      GroupPath xe = no_extend ? x : ensure_extended(x);
      PathFunctional f = make_functional(fspec, xe.d());
      MeshSchedule sched{1.0 / 16, levels, 1e-9};
      ItoReport rep;
      if (level == 1) {
        rep = check_ito_young(f, xe, t, sched);
      } else {
        GroupPath x2 = xe.level() == 2 ? xe : lift_to_level(xe, 2);
        rep = check_ito_rough(f, x2, t, sched);
      }
      bool pass = std::abs(rep.residual) <= tol;
      emit(ito_report_json(rep, tol, pass), out_file);
      return pass ? 0 : 1;
    }

    if (taylor_cmd->parsed()) {
      GroupPath x = path_file.empty() ? fixtures::two_segment() : load_path(path_file);
      GroupPath xe = no_extend ? x : ensure_extended(x);
      PathFunctional f = make_functional(fspec, xe.d());
      TaylorReport rep = taylor_expand(f, xe, t, K);
      json j;
      j["K"] = rep.K;
      j["t"] = rep.t;
      j["order_contrib"] = rep.order_contrib;
      j["partial_sum"] = rep.partial_sum;
      j["remainder"] = rep.remainder;
      j["value"] = rep.value;
      j["defect"] = rep.defect;
      bool pass = std::abs(rep.defect) <= tol;
      j["tolerance"] = tol;
      j["pass"] = pass;
      emit(j.dump(2) + "\n", out_file);
      return pass ? 0 : 1;
    }

    if (qv_cmd->parsed()) {
      GroupPath x = load_path(path_file);
      QVReport rep = foellmer_qv(x, t, 6, depth);
      CsvWriter csv({"depth", "component", "value"});
      for (std::size_t l = 0; l < rep.per_level.size(); ++l)
        for (std::size_t c = 0; c < rep.per_level[l].size(); ++c)
          csv.row({std::to_string(rep.depths[l]), std::to_string(c),
                   format_double(rep.per_level[l][c])});
      emit(csv.text(), out_file);
      return rep.converged ? 0 : 1;
    }

    if (rie_cmd->parsed()) {
      GroupPath x = load_path(path_file);
      RieReport rep = check_rie(x, pvar, depth_first, depth_last);
      json j;
      j["depths"] = rep.depths;
      j["uniform_dev"] = rep.uniform_dev;
      j["riemann_dev"] = rep.riemann_dev;
      j["control_witness"] = rep.control_witness;
      j["clause_i"] = rep.clause_i;
      j["clause_ii"] = rep.clause_ii;
      j["clause_iii"] = rep.clause_iii;
      j["lift_symmetry_defect"] = rep.lift_symmetry_defect;
      j["lift_vs_marcus"] = rep.lift_vs_marcus;
      j["e9_deviation"] = rep.e9_deviation;
      j["holds"] = rep.holds();
      emit(j.dump(2) + "\n", out_file);
      return rep.holds() ? 0 : 1;
    }

    if (uat_cmd->parsed()) {
      GroupPath x = load_path(path_file);
      GroupPath xe = no_extend ? x : ensure_extended(x);
      PathFunctional f = make_functional(fspec, xe.d());
      CsvWriter csv({"N", "sup_err_f", "sup_err_grad", "rank", "cols"});
      std::vector<int> ns;
      for (auto& piece : CLI::detail::split(fit_levels, ',')) ns.push_back(std::stoi(piece));
      double prev = 1e300;
      bool monotone = true;
      double last_f = 0.0;
      for (int n : ns) {
        UatReport rep = uat_fit(f, xe, n, grid, 1);
        csv.row({std::to_string(rep.N), format_double(rep.sup_err_f),
                 format_double(rep.sup_err_grad[0]), std::to_string(rep.rank),
                 std::to_string(rep.cols)});
        monotone = monotone && rep.sup_err_f <= prev + 1e-12;
        prev = rep.sup_err_f;
        last_f = rep.sup_err_f;
      }
      emit(csv.text(), out_file);
      return (monotone && last_f < 1e-2) ? 0 : 1;
    }

    if (fix_cmd->parsed()) {
      std::filesystem::create_directories(out_dir);
      save_path(fixtures::two_segment(), out_dir + "/two_segment.json");
      save_path(fixtures::oscillatory(), out_dir + "/oscillatory_n8.json");
      save_path(fixtures::pure_jump_11(), out_dir + "/pure_jump_11.json");
      save_path(fixtures::two_jump_drift(), out_dir + "/two_jump_drift.json");
      save_path(fixtures::qv_steps(), out_dir + "/qv_steps.json");
      save_path(fixtures::kinked_line(), out_dir + "/kinked_line.json");
      std::cout << "wrote 6 fixtures to " << out_dir << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
