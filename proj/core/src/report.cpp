#include "cayspec/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "cayspec/error.hpp"

#ifndef CAYSPEC_VERSION
#define CAYSPEC_VERSION "0.0.0"
#endif

namespace cayspec {

std::string_view version() noexcept { return CAYSPEC_VERSION; }

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

void write_string(std::string& out, const std::string& s) {
  // Reuse the library's escaping for strings.
  out += Json(s).dump();
}

void write(std::string& out, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write_string(out, it.key());
        out += ": ";
        write(out, it.value(), depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(out, j[i], depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_number(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_stable(const Json& j) {
  std::string out;
  write(out, j, 0);
  out += '\n';
  return out;
}

Json strip_timing(Json j) {
  if (j.is_object()) {
    j.erase("seconds");
    j.erase("timing");
    for (auto& [key, value] : j.items()) value = strip_timing(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = strip_timing(value);
  }
  return j;
}

Json RunManifest::to_json() const {
  Json t = Json::object();
  for (const auto& [phase, s] : timing) t[phase] = s;
  return Json{{"tool", "cayspec"},
              {"version", std::string(version())},
              {"command", command},
              {"config", config},
              {"group", group},
              {"timing", t}};
}

std::string reproduction_command(std::string_view subcommand, const Json& config) {
  std::string cmd = "cayspec " + std::string(subcommand);
  for (auto it = config.begin(); it != config.end(); ++it) {
    const Json& v = it.value();
    if (v.is_null() || (v.is_boolean() && !v.get<bool>())) continue;
    cmd += " --" + it.key();
    if (v.is_boolean()) continue;
    if (v.is_string()) {
      cmd += " " + v.get<std::string>();
    } else if (v.is_number_float()) {
      cmd += " " + format_number(v.get<double>());
    } else if (v.is_array()) {
      for (const auto& e : v) cmd += " " + (e.is_string() ? e.get<std::string>() : e.dump());
    } else {
      cmd += " " + v.dump();
    }
  }
  return cmd;
}

Json to_json(const TrialRecord& r) {
  Json j{{"trial", r.trial},
         {"seed", r.seed},
         {"subset_hash", r.subset_hash},
         {"computed", r.computed},
         {"seconds", r.seconds}};
  if (r.computed) {
    j["nu"] = r.nu;
    j["mu"] = r.mu;
    j["bound"] = r.bound;
    j["fail"] = r.fail;
  } else {
    j["error"] = r.error;
  }
  return j;
}

Json to_json(const ExperimentResult& r) {
  Json trials = Json::array();
  for (const auto& t : r.records) trials.push_back(to_json(t));
  return Json{{"n", r.n},
              {"k", r.config.k},
              {"eps", r.config.eps},
              {"dsum", r.dsum},
              {"warnings", r.warnings},
              {"trials", trials},
              {"aggregates",
               {{"auto_m", r.auto_m},
                {"used_m", r.used_m},
                {"computed", r.computed},
                {"failures", r.failures},
                {"emp_prob", r.emp_prob},
                {"wilson95", {r.wilson95.first, r.wilson95.second}},
                {"six_over_n", r.six_over_n},
                {"bernstein_tail_at_eps", r.bernstein_tail_at_eps},
                {"max_nu", r.max_nu},
                {"mean_mu", r.mean_mu},
                {"frac_nu_above_eps_m_over_k", r.frac_nu_above},
                {"bound_violations", r.bound_violations},
                {"implication_violations", r.implication_violations}}}};
}

std::string experiment_csv(const ExperimentResult& r) {
  std::string out(kExperimentCsvHeader);
  out += '\n';
  for (const auto& t : r.records) {
    out += std::to_string(t.trial) + "," + std::to_string(r.used_m) + ",";
    if (t.computed) {
      out += format_number(t.nu) + "," + format_number(t.bound) + "," + format_number(t.mu) + "," +
             (t.fail ? "1" : "0");
    } else {
      out += ",,,";
    }
    out += "," + format_number(t.seconds) + "\n";
  }
  return out;
}

void write_output(const std::string& path, std::string_view text, std::ostream& console) {
  if (path.empty() || path == "-") {
    console << text;
    console.flush();
    if (!console) throw Error(ErrorCode::IoError, "failed writing report");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error(ErrorCode::IoError, "failed writing " + path);
}

}  // namespace cayspec
