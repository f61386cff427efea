#include "superdiff/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "superdiff/accuracy.hpp"
#include "superdiff/automodel.hpp"
#include "superdiff/exact.hpp"
#include "superdiff/kernel.hpp"
#include "superdiff/reconstruct.hpp"

namespace superdiff {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string mesh_desc(const MeshSpec& m) {
  return fmt(m.lo) + ":" + fmt(m.hi) + ":" + std::to_string(m.points_per_decade);
}

std::string header_lines(const SweepSpec& spec, double gamma) {
  std::string h = "# gamma=" + gamma_tag(gamma) +
                  " t_mesh=" + mesh_desc(spec.t_mesh) +
                  " s_mesh=" + mesh_desc(spec.s_mesh) + "\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(spec.checksum()));
  h += std::string("# spec_checksum=") + buf + "\n";
  return h;
}

// Temp-file-then-rename so a crash never leaves a partial artifact visible.
void atomic_write(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string());
    os << content;
    if (!os.flush())
      throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

bool artifact_matches(const fs::path& path, const SweepSpec& spec,
                      double gamma) {
  std::ifstream is(path);
  if (!is) return false;
  std::string line1, line2;
  if (!std::getline(is, line1) || !std::getline(is, line2)) return false;
  const std::string expected = header_lines(spec, gamma);
  return expected == line1 + "\n" + line2 + "\n";
}

struct ParsedLine {
  std::string key, value;
  bool section_open = false;
  bool section_close = false;
};

ParsedLine parse_line(std::string line) {
  const auto hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  line = trim(line);
  ParsedLine p;
  if (line.empty()) return p;
  if (line == "}") {
    p.section_close = true;
    return p;
  }
  if (line.back() == '{') {
    p.section_open = true;
    p.key = trim(line.substr(0, line.size() - 1));
    return p;
  }
  const auto eq = line.find('=');
  if (eq == std::string::npos)
    throw std::runtime_error("sweep spec: cannot parse line '" + line + "'");
  p.key = trim(line.substr(0, eq));
  p.value = trim(line.substr(eq + 1));
  return p;
}

double to_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw std::runtime_error("sweep spec: bad numeric value '" + v +
                             "' for key '" + key + "'");
  }
}

int to_int(const std::string& v, const std::string& key) {
  const double d = to_double(v, key);
  const int i = static_cast<int>(std::llround(d));
  if (std::abs(d - i) > 1e-9)
    throw std::runtime_error("sweep spec: key '" + key +
                             "' expects an integer, got '" + v + "'");
  return i;
}

}  // namespace

QuadratureConfig SweepSpec::inner_cfg() const {
  QuadratureConfig cfg;
  cfg.rel_tol = rel_tol_inner;
  cfg.abs_tol = abs_tol;
  cfg.max_cells = max_cells;
  cfg.max_panel_depth = max_panel_depth;
  return cfg;
}

QuadratureConfig SweepSpec::outer_cfg() const {
  QuadratureConfig cfg = inner_cfg();
  cfg.rel_tol = rel_tol_outer;
  return cfg;
}

std::string SweepSpec::canonical() const {
  // parallelism and output_dir do not influence any computed byte, so they
  // stay out of the checksum.
  std::string s;
  s += "gamma_mesh " + fmt(gamma_mesh.lo) + " " + fmt(gamma_mesh.hi) + " " +
       fmt(gamma_mesh.step) + "\n";
  s += "t_mesh " + mesh_desc(t_mesh) + "\n";
  s += "s_mesh " + mesh_desc(s_mesh) + "\n";
  s += "quadrature " + fmt(rel_tol_inner) + " " + fmt(rel_tol_outer) + " " +
       fmt(abs_tol) + " " + std::to_string(max_cells) + " " +
       std::to_string(max_panel_depth) + "\n";
  return s;
}

std::uint64_t SweepSpec::checksum() const { return fnv1a64(canonical()); }

SweepSpec SweepSpec::parse(const std::string& text) {
  SweepSpec spec;
  double g_lo = 0, g_hi = 0, g_step = 0;
  bool have_gamma = false, have_t = false, have_s = false;
  std::string section;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const ParsedLine p = parse_line(line);
    if (p.key.empty() && !p.section_close) continue;
    if (p.section_open) {
      if (!section.empty())
        throw std::runtime_error("sweep spec: nested section '" + p.key + "'");
      if (p.key != "gamma_mesh" && p.key != "t_mesh" && p.key != "s_mesh" &&
          p.key != "quadrature")
        throw std::runtime_error("sweep spec: unknown section '" + p.key + "'");
      section = p.key;
      if (section == "gamma_mesh") have_gamma = true;
      if (section == "t_mesh") have_t = true;
      if (section == "s_mesh") have_s = true;
      continue;
    }
    if (p.section_close) {
      if (section.empty())
        throw std::runtime_error("sweep spec: stray '}'");
      section.clear();
      continue;
    }
    if (section.empty()) {
      if (p.key == "output_dir")
        spec.output_dir = p.value;
      else if (p.key == "parallelism")
        spec.parallelism = to_int(p.value, p.key);
      else
        throw std::runtime_error("sweep spec: unknown key '" + p.key + "'");
    } else if (section == "gamma_mesh") {
      if (p.key == "lo")
        g_lo = to_double(p.value, p.key);
      else if (p.key == "hi")
        g_hi = to_double(p.value, p.key);
      else if (p.key == "step")
        g_step = to_double(p.value, p.key);
      else
        throw std::runtime_error("sweep spec: unknown gamma_mesh key '" +
                                 p.key + "'");
    } else if (section == "t_mesh" || section == "s_mesh") {
      MeshSpec& m = section == "t_mesh" ? spec.t_mesh : spec.s_mesh;
      if (p.key == "lo")
        m.lo = to_double(p.value, p.key);
      else if (p.key == "hi")
        m.hi = to_double(p.value, p.key);
      else if (p.key == "points_per_decade")
        m.points_per_decade = to_int(p.value, p.key);
      else
        throw std::runtime_error("sweep spec: unknown " + section + " key '" +
                                 p.key + "'");
    } else {  // quadrature
      if (p.key == "rel_tol_inner")
        spec.rel_tol_inner = to_double(p.value, p.key);
      else if (p.key == "rel_tol_outer")
        spec.rel_tol_outer = to_double(p.value, p.key);
      else if (p.key == "abs_tol")
        spec.abs_tol = to_double(p.value, p.key);
      else if (p.key == "max_cells")
        spec.max_cells = to_int(p.value, p.key);
      else if (p.key == "max_panel_depth")
        spec.max_panel_depth = to_int(p.value, p.key);
      else
        throw std::runtime_error("sweep spec: unknown quadrature key '" +
                                 p.key + "'");
    }
  }
  if (!section.empty())
    throw std::runtime_error("sweep spec: unterminated section '" + section +
                             "'");
  if (!have_gamma || !have_t || !have_s)
    throw std::runtime_error(
        "sweep spec: gamma_mesh, t_mesh and s_mesh sections are required");
  if (spec.output_dir.empty())
    throw std::runtime_error("sweep spec: output_dir is required");
  if (spec.parallelism < 1)
    throw std::runtime_error("sweep spec: parallelism must be >= 1");
  if (g_hi == g_lo) {
    // Single-gamma sweep; one task.
    spec.gamma_mesh.lo = spec.gamma_mesh.hi = g_lo;
    spec.gamma_mesh.step = g_step > 0 ? g_step : 1.0;
    spec.gamma_mesh.values = {g_lo};
  } else {
    spec.gamma_mesh = linear_mesh(g_lo, g_hi, g_step);
  }
  // Mesh validity check up front.
  log_mesh(spec.t_mesh.lo, spec.t_mesh.hi, spec.t_mesh.points_per_decade);
  log_mesh(spec.s_mesh.lo, spec.s_mesh.hi, spec.s_mesh.points_per_decade);
  spec.inner_cfg().validate();
  spec.outer_cfg().validate();
  return spec;
}

SweepSpec SweepSpec::parse_file(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open sweep spec " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

std::string gamma_tag(double gamma) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", gamma);
  return buf;
}

std::vector<TaskResult> plan(const SweepSpec& spec) {
  std::vector<TaskResult> tasks;
  const std::uint64_t sum = spec.checksum();
  for (double gamma : spec.gamma_mesh.values) {
    TaskResult t;
    t.gamma = gamma;
    t.checksum = sum;
    const std::string tag = gamma_tag(gamma);
    t.field_path = spec.output_dir / ("field_gamma_" + tag + ".csv");
    t.qfield_path = spec.output_dir / ("qfield_gamma_" + tag + ".csv");
    t.gcurve_path = spec.output_dir / ("gcurve_gamma_" + tag + ".csv");
    t.accuracy_path = spec.output_dir / ("accuracy_gamma_" + tag + ".csv");
    const bool done = artifact_matches(t.field_path, spec, gamma) &&
                      artifact_matches(t.qfield_path, spec, gamma) &&
                      artifact_matches(t.gcurve_path, spec, gamma) &&
                      artifact_matches(t.accuracy_path, spec, gamma);
    t.status = done ? TaskStatus::Done : TaskStatus::Pending;
    tasks.push_back(std::move(t));
  }
  return tasks;
}

namespace {

void run_one_task(const SweepSpec& spec, TaskResult& task, int inner_threads) {
  const auto start = std::chrono::steady_clock::now();
  const KernelParams params(task.gamma);
  const LogMesh t_mesh =
      log_mesh(spec.t_mesh.lo, spec.t_mesh.hi, spec.t_mesh.points_per_decade);
  const LogMesh s_mesh =
      log_mesh(spec.s_mesh.lo, spec.s_mesh.hi, spec.s_mesh.points_per_decade);

  const GTable table =
      GTable::for_time_range(params, t_mesh.hi, spec.inner_cfg());
  const ExactField field = exact_field(params, t_mesh, s_mesh,
                                       spec.outer_cfg(), table, inner_threads);
  const QField qf = q_field(params, field);
  const GCurve curve = g_curve_from(qf);
  const AccuracyReport rep = analyze_accuracy(field, curve);

  const std::string head = header_lines(spec, task.gamma);
  const std::size_t nt = t_mesh.values.size();
  const std::size_t ns = s_mesh.values.size();

  {
    std::string out = head;
    out += "t,s,rho,f_exact_reg,f_auto,q_w,ratio\n";
    for (std::size_t i = 0; i < nt; ++i) {
      const double t = t_mesh.values[i];
      for (std::size_t j = 0; j < ns; ++j) {
        const double s = s_mesh.values[j];
        const double rho = similarity_rho(params, t, s);
        out += fmt(t) + "," + fmt(s) + "," + fmt(rho) + "," +
               fmt(field.at(i, j)) + "," +
               fmt(automodel_density(curve, rho, t)) + "," + fmt(qf.at(i, j)) +
               "," + fmt(rep.ratio[i * ns + j]) + "\n";
      }
    }
    atomic_write(task.field_path, out);
  }
  {
    std::string out = head;
    out += "t,s,q_w,q_w_normalized\n";
    for (std::size_t i = 0; i < nt; ++i)
      for (std::size_t j = 0; j < ns; ++j)
        out += fmt(t_mesh.values[i]) + "," + fmt(s_mesh.values[j]) + "," +
               fmt(qf.at(i, j)) + "," + fmt(qf.at(i, j) / qf.q_avg[j]) + "\n";
    atomic_write(task.qfield_path, out);
  }
  {
    std::ostringstream os;
    os << head;
    curve.save(os);
    atomic_write(task.gcurve_path, os.str());
  }
  {
    std::string out = head;
    out += "gamma,t10,t_star,s_star,max_error_after_t10\n";
    out += gamma_tag(task.gamma) + "," + fmt(rep.t10) + "," + fmt(rep.t_star) + "," +
           fmt(rep.s_star) + "," + fmt(rep.max_error_after_t10) + "\n";
    atomic_write(task.accuracy_path, out);
  }

  task.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  task.status = TaskStatus::Done;
}

}  // namespace

TaskResult run_single(const SweepSpec& spec, double gamma, int inner_threads) {
  fs::create_directories(spec.output_dir);
  TaskResult task;
  task.gamma = gamma;
  task.checksum = spec.checksum();
  const std::string tag = gamma_tag(gamma);
  task.field_path = spec.output_dir / ("field_gamma_" + tag + ".csv");
  task.qfield_path = spec.output_dir / ("qfield_gamma_" + tag + ".csv");
  task.gcurve_path = spec.output_dir / ("gcurve_gamma_" + tag + ".csv");
  task.accuracy_path = spec.output_dir / ("accuracy_gamma_" + tag + ".csv");
  run_one_task(spec, task, inner_threads);
  return task;
}

void run(const SweepSpec& spec, std::vector<TaskResult>& tasks, int max_tasks,
         double only_gamma) {
  const std::uint64_t sum = spec.checksum();
  for (const TaskResult& t : tasks)
    if (t.checksum != sum)
      throw std::runtime_error(
          "sweep run: plan checksum does not match the spec (stale plan)");
  fs::create_directories(spec.output_dir);

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].status != TaskStatus::Pending) continue;
    if (std::isfinite(only_gamma) &&
        std::abs(tasks[i].gamma - only_gamma) > 1e-9)
      continue;
    pending.push_back(i);
    if (max_tasks > 0 && pending.size() >= static_cast<std::size_t>(max_tasks))
      break;
  }
  if (pending.empty()) return;

  const int pool = std::min<int>(spec.parallelism,
                                 static_cast<int>(pending.size()));
  // Two-level parallelism: idle pool capacity goes to per-task t-rows.
  const int inner_threads = std::max(1, spec.parallelism / pool);

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= pending.size()) return;
      TaskResult& task = tasks[pending[k]];
      try {
        run_one_task(spec, task, inner_threads);
        std::lock_guard<std::mutex> lock(log_mutex);
        std::fprintf(stderr, "[sweep] gamma=%s done (%.1f s)\n",
                     gamma_tag(task.gamma).c_str(), task.wall_time_s);
      } catch (const std::exception& e) {
        task.status = TaskStatus::Failed;
        task.diagnostics = e.what();
        std::lock_guard<std::mutex> lock(log_mutex);
        std::fprintf(stderr, "[sweep] gamma=%s FAILED: %s\n",
                     gamma_tag(task.gamma).c_str(), e.what());
      }
    }
  };
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (int i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
}

std::vector<double> aggregate(const SweepSpec& spec) {
  const std::vector<TaskResult> tasks = plan(spec);
  std::vector<double> gaps;
  std::string boundary = "gamma,t10,t_star,s_star,max_error_after_t10\n";
  std::string gcurves = "gamma,s,g\n";
  std::string manifest = "sweep manifest\nspec:\n";
  {
    std::istringstream canon(spec.canonical());
    std::string line;
    while (std::getline(canon, line)) manifest += "  " + line + "\n";
  }
  char sumbuf[32];
  std::snprintf(sumbuf, sizeof(sumbuf), "%016llx",
                static_cast<unsigned long long>(spec.checksum()));
  manifest += std::string("spec_checksum: ") + sumbuf + "\n";
  std::size_t done = 0;

  for (const TaskResult& t : tasks) {
    const bool any = fs::exists(t.field_path) || fs::exists(t.qfield_path) ||
                     fs::exists(t.gcurve_path) || fs::exists(t.accuracy_path);
    if (t.status != TaskStatus::Done) {
      if (any)
        throw std::runtime_error(
            "aggregate: incomplete or stale artifact set for gamma=" +
            gamma_tag(t.gamma));
      gaps.push_back(t.gamma);
      manifest += "task gamma=" + gamma_tag(t.gamma) + " status=missing\n";
      continue;
    }
    ++done;
    // Boundary row: line after the two headers and the column line.
    {
      std::ifstream is(t.accuracy_path);
      std::string line, row;
      int data_lines = 0;
      while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        ++data_lines;
        if (data_lines == 2) row = line;
      }
      if (row.empty())
        throw std::runtime_error("aggregate: malformed accuracy artifact for gamma=" +
                                 gamma_tag(t.gamma));
      boundary += row + "\n";
    }
    {
      std::ifstream is(t.gcurve_path);
      std::string line;
      while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto sp = line.find(' ');
        gcurves += gamma_tag(t.gamma) + "," + line.substr(0, sp) + "," +
                   line.substr(sp + 1) + "\n";
      }
    }
    manifest += "task gamma=" + gamma_tag(t.gamma) + " status=done";
    for (const fs::path& p :
         {t.field_path, t.qfield_path, t.gcurve_path, t.accuracy_path}) {
      std::ifstream is(p, std::ios::binary);
      std::ostringstream ss;
      ss << is.rdbuf();
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%016llx",
                    static_cast<unsigned long long>(fnv1a64(ss.str())));
      manifest += " " + p.filename().string() + "=" + buf;
    }
    manifest += "\n";
  }
  if (done == 0)
    throw std::runtime_error("aggregate: no completed task artifacts in " +
                             spec.output_dir.string());

  atomic_write(spec.output_dir / "boundary.csv", boundary);
  atomic_write(spec.output_dir / "gcurves.csv", gcurves);
  atomic_write(spec.output_dir / "manifest.txt", manifest);
  return gaps;
}

}  // namespace superdiff
