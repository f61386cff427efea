// Command-line front end: single-point evaluations, per-gamma pipelines,
// sweeps and figure-data exporters. All numeric output uses 17 significant
// digits so files round-trip and re-exports are byte-identical.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "superdiff/accuracy.hpp"
#include "superdiff/automodel.hpp"
#include "superdiff/exact.hpp"
#include "superdiff/kernel.hpp"
#include "superdiff/meshes.hpp"
#include "superdiff/reconstruct.hpp"
#include "superdiff/sweep.hpp"

namespace fs = std::filesystem;
using namespace superdiff;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitIo = 3;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct MeshOptions {
  double t_lo = 30.0, t_hi = 1e6;
  int t_ppd = 100;
  double s_lo = 0.01, s_hi = 1000.0;
  int s_ppd = 25;

  void attach(CLI::App* cmd) {
    cmd->add_option("--t-lo", t_lo, "t-mesh lower bound");
    cmd->add_option("--t-hi", t_hi, "t-mesh upper bound");
    cmd->add_option("--t-ppd", t_ppd, "t-mesh points per decade");
    cmd->add_option("--s-lo", s_lo, "s-mesh lower bound");
    cmd->add_option("--s-hi", s_hi, "s-mesh upper bound");
    cmd->add_option("--s-ppd", s_ppd, "s-mesh points per decade");
  }
  SweepSpec to_spec(double gamma, const fs::path& out, int parallelism) const {
    SweepSpec spec;
    spec.gamma_mesh.lo = spec.gamma_mesh.hi = gamma;
    spec.gamma_mesh.step = 1.0;
    spec.gamma_mesh.values = {gamma};
    spec.t_mesh = {t_lo, t_hi, t_ppd};
    spec.s_mesh = {s_lo, s_hi, s_ppd};
    spec.output_dir = out;
    spec.parallelism = parallelism;
    return spec;
  }
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// gamma tags of complete artifact sets under dir, sorted.
std::vector<std::string> discover_gammas(const fs::path& dir) {
  std::vector<std::string> tags;
  if (!fs::is_directory(dir))
    throw std::runtime_error("not a directory: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    const std::string prefix = "accuracy_gamma_";
    if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size() + 4) {
      const std::string tag =
          name.substr(prefix.size(), name.size() - prefix.size() - 4);
      for (const char* p : {"field_gamma_", "qfield_gamma_", "gcurve_gamma_"})
        if (!fs::exists(dir / (p + tag + ".csv")))
          throw std::runtime_error("incomplete artifact set for gamma=" + tag);
      tags.push_back(tag);
    }
  }
  std::sort(tags.begin(), tags.end());
  return tags;
}

double read_t10(const fs::path& accuracy_csv) {
  std::ifstream is(accuracy_csv);
  if (!is) throw std::runtime_error("cannot open " + accuracy_csv.string());
  std::string line;
  int data = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (++data == 2) return std::stod(split_csv(line)[1]);
  }
  throw std::runtime_error("malformed accuracy artifact " +
                           accuracy_csv.string());
}

void export_fig345(const fs::path& dir, const std::string& only_tag) {
  const auto tags = discover_gammas(dir);
  bool matched = false;
  for (const std::string& tag : tags) {
    if (!only_tag.empty() && tag != only_tag) continue;
    matched = true;
    const double t10 = read_t10(dir / ("accuracy_gamma_" + tag + ".csv"));
    // Panels (a) and (b) from the Q-field artifact, (c) from the ratio
    // column of the field artifact; rows restricted to t >= t10.
    std::string fa = "s,t,q_w\n", fb = "s,t,q_w_normalized\n",
                fc = "s,t,ratio\n";
    {
      std::ifstream is(dir / ("qfield_gamma_" + tag + ".csv"));
      std::string line;
      while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't') continue;
        const auto c = split_csv(line);
        if (!(std::stod(c[0]) >= t10)) continue;
        fa += c[1] + "," + c[0] + "," + c[2] + "\n";
        fb += c[1] + "," + c[0] + "," + c[3] + "\n";
      }
    }
    {
      std::ifstream is(dir / ("field_gamma_" + tag + ".csv"));
      std::string line;
      while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't') continue;
        const auto c = split_csv(line);
        if (!(std::stod(c[0]) >= t10)) continue;
        fc += c[1] + "," + c[0] + "," + c[6] + "\n";
      }
    }
    auto write = [&](const std::string& name, const std::string& content) {
      std::ofstream os(dir / name, std::ios::binary | std::ios::trunc);
      if (!os) throw std::runtime_error("cannot write " + name);
      os << content;
    };
    write("fig_a_gamma_" + tag + ".csv", fa);
    write("fig_b_gamma_" + tag + ".csv", fb);
    write("fig_c_gamma_" + tag + ".csv", fc);
  }
  if (!matched)
    throw std::runtime_error(only_tag.empty()
                                 ? "no task artifacts in " + dir.string()
                                 : "no artifacts for gamma=" + only_tag);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superdiffusive 1D transport: exact Green's function, "
               "automodel accuracy maps and parameter sweeps"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand(
      "solve", "Evaluate the regular part of the exact Green's function");
  double sv_gamma = 1.0, sv_t = 100.0, sv_x = 0.0, sv_rel = 1e-8;
  solve->add_option("--gamma", sv_gamma, "power-law exponent in (0,2)")
      ->required();
  solve->add_option("--t", sv_t, "time (units of the waiting time)")
      ->required();
  solve->add_option("--x", sv_x, "space coordinate")->required();
  solve->add_option("--rel-tol", sv_rel, "outer quadrature tolerance");

  // gtable
  auto* gtable = app.add_subcommand(
      "gtable", "Dump the characteristic exponent G(p) table");
  double gt_gamma = 1.0, gt_plo = 1e-8, gt_phi = 1e4;
  int gt_ppd = 100;
  std::string gt_out;
  gtable->add_option("--gamma", gt_gamma)->required();
  gtable->add_option("--p-lo", gt_plo, "table lower bound");
  gtable->add_option("--p-hi", gt_phi, "table upper bound");
  gtable->add_option("--points-per-decade", gt_ppd);
  gtable->add_option("--out", gt_out, "output file (default stdout)");

  // reconstruct
  auto* rec = app.add_subcommand(
      "reconstruct", "Run the full pipeline for one gamma, write artifacts");
  double rc_gamma = 1.0;
  int rc_par = 1;
  std::string rc_out = "out";
  MeshOptions rc_mesh;
  rec->add_option("--gamma", rc_gamma)->required();
  rec->add_option("--out", rc_out, "artifact directory");
  rec->add_option("--parallelism", rc_par, "worker threads");
  rc_mesh.attach(rec);

  // boundary
  auto* bnd = app.add_subcommand(
      "boundary", "Compute and print the 10% applicability boundary t10");
  double bd_gamma = 1.0;
  int bd_par = 1;
  MeshOptions bd_mesh;
  bnd->add_option("--gamma", bd_gamma)->required();
  bnd->add_option("--parallelism", bd_par, "worker threads");
  bd_mesh.attach(bnd);

  // sweep
  auto* swp = app.add_subcommand("sweep", "Run a declarative multi-gamma sweep");
  std::string sw_spec;
  int sw_par = 0;
  double sw_only = std::numeric_limits<double>::quiet_NaN();
  swp->add_option("--spec", sw_spec, "sweep spec file")->required();
  swp->add_option("--parallelism", sw_par, "override spec parallelism");
  swp->add_option("--only-gamma", sw_only,
                  "run a single mesh value (external-scheduler mode)");

  // exporters
  auto* fig2 = app.add_subcommand("export-fig2",
                                  "Export the t10(gamma) boundary table");
  std::string f2_dir;
  fig2->add_option("--dir", f2_dir, "aggregated sweep directory")->required();

  auto* fig345 = app.add_subcommand(
      "export-fig345", "Export Q_W, normalized Q_W and ratio panels per gamma");
  std::string f3_dir, f3_gamma;
  fig345->add_option("--dir", f3_dir, "sweep artifact directory")->required();
  fig345->add_option("--gamma", f3_gamma, "restrict to one gamma tag, e.g. 1.00");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const KernelParams params(sv_gamma);
      QuadratureConfig cfg = outer_quadrature_default();
      cfg.rel_tol = sv_rel;
      const double f = green_regular(params, sv_x, sv_t, cfg);
      std::cout << "f_regular " << fmt(f) << "\n"
                << "delta_weight " << fmt(std::exp(-sv_t)) << "\n";
    } else if (*gtable) {
      const KernelParams params(gt_gamma);
      const GTable table(params, gt_plo, gt_phi, gt_ppd,
                         inner_quadrature_default());
      if (gt_out.empty()) {
        table.save(std::cout);
      } else {
        std::ofstream os(gt_out, std::ios::binary | std::ios::trunc);
        if (!os) {
          std::cerr << "error: cannot write " << gt_out << "\n";
          return kExitIo;
        }
        table.save(os);
      }
    } else if (*rec) {
      const SweepSpec spec = rc_mesh.to_spec(rc_gamma, rc_out, rc_par);
      const TaskResult task = run_single(spec, rc_gamma, rc_par);
      std::cout << "artifacts written to " << spec.output_dir.string() << " ("
                << fmt(task.wall_time_s) << " s)\n";
    } else if (*bnd) {
      const KernelParams params(bd_gamma);
      const LogMesh tm = log_mesh(bd_mesh.t_lo, bd_mesh.t_hi, bd_mesh.t_ppd);
      const LogMesh sm = log_mesh(bd_mesh.s_lo, bd_mesh.s_hi, bd_mesh.s_ppd);
      const GTable table = GTable::for_time_range(params, tm.hi);
      const ExactField field = exact_field(
          params, tm, sm, outer_quadrature_default(), table, bd_par);
      const GCurve curve = g_curve_from(q_field(params, field));
      const AccuracyReport rep = analyze_accuracy(field, curve);
      std::cout << "t10 " << (rep.t10_reached ? fmt(rep.t10) : "not_reached")
                << "\n";
    } else if (*swp) {
      SweepSpec spec;
      try {
        spec = SweepSpec::parse_file(sw_spec);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
      }
      if (sw_par > 0) spec.parallelism = sw_par;
      std::vector<TaskResult> tasks = plan(spec);
      run(spec, tasks, 0, sw_only);
      bool failed = false;
      for (const TaskResult& t : tasks)
        if (t.status == TaskStatus::Failed) {
          failed = true;
          std::cerr << "task gamma=" << gamma_tag(t.gamma)
                    << " failed: " << t.diagnostics << "\n";
        }
      if (!std::isfinite(sw_only)) {
        const auto gaps = aggregate(spec);
        for (double g : gaps)
          std::cerr << "aggregate: missing gamma=" << gamma_tag(g) << "\n";
        if (!gaps.empty()) failed = true;
      }
      if (failed) return kExitNumeric;
    } else if (*fig2) {
      const fs::path src = fs::path(f2_dir) / "boundary.csv";
      std::ifstream is(src, std::ios::binary);
      if (!is) {
        std::cerr << "error: missing " << src.string()
                  << " (run a sweep first)\n";
        return kExitIo;
      }
      std::ofstream os(fs::path(f2_dir) / "fig2.csv",
                       std::ios::binary | std::ios::trunc);
      os << is.rdbuf();
      if (!os.flush()) {
        std::cerr << "error: cannot write fig2.csv\n";
        return kExitIo;
      }
    } else if (*fig345) {
      export_fig345(f3_dir, f3_gamma);
    }
  } catch (const QuadratureError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
