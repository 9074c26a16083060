#include "rdciag/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rdciag {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

std::string join_path(const std::string& base, const std::string& rel) {
  if (rel.empty() || rel[0] == '/') return rel;
  if (base.empty() || base == ".") return rel;
  return base + "/" + rel;
}

struct Parser {
  std::vector<ConfigError>& errors;

  bool to_double(const std::string& v, int line, const char* key, double& out) {
    char* end = nullptr;
    out = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') {
      errors.push_back({line, std::string("line ") + std::to_string(line) +
                                  ": value of '" + key + "' is not a number"});
      return false;
    }
    return true;
  }

  bool to_long(const std::string& v, int line, const char* key, long& out) {
    char* end = nullptr;
    out = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') {
      errors.push_back({line, std::string("line ") + std::to_string(line) +
                                  ": value of '" + key + "' is not an integer"});
      return false;
    }
    return true;
  }

  bool to_u64(const std::string& v, int line, const char* key,
              std::uint64_t& out) {
    char* end = nullptr;
    out = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') {
      errors.push_back({line, std::string("line ") + std::to_string(line) +
                                  ": value of '" + key + "' is not an integer"});
      return false;
    }
    return true;
  }

  std::vector<double> to_double_list(const std::string& v, int line,
                                     const char* key) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(v);
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      double d;
      if (!to_double(item, line, key, d)) return {};
      out.push_back(d);
    }
    if (out.empty())
      errors.push_back({line, std::string("line ") + std::to_string(line) +
                                  ": empty list for '" + key + "'"});
    return out;
  }

  // "box lo... : hi...", "halfspace a... : c", "hyperplane a... : b",
  // "ball center... : r", "whole n"
  std::optional<ConvexSet> to_set(const std::string& v, int line,
                                  const char* key) {
    auto toks = split_tokens(v);
    auto fail = [&](const std::string& msg) -> std::optional<ConvexSet> {
      errors.push_back({line, "line " + std::to_string(line) + ": " + msg +
                                  " for '" + key + "'"});
      return std::nullopt;
    };
    if (toks.empty()) return fail("empty set description");
    std::string kind = toks[0];
    std::vector<double> head, tail;
    bool after_colon = false;
    for (size_t t = 1; t < toks.size(); ++t) {
      if (toks[t] == ":") {
        after_colon = true;
        continue;
      }
      double d;
      if (!to_double(toks[t], line, key, d)) return std::nullopt;
      (after_colon ? tail : head).push_back(d);
    }
    try {
      if (kind == "whole") {
        if (head.size() != 1 || !tail.empty())
          return fail("expected 'whole <dim>'");
        return ConvexSet::whole_space(static_cast<int>(head[0]));
      }
      if (kind == "box") {
        if (head.empty() || head.size() != tail.size())
          return fail("expected 'box <lo...> : <hi...>'");
        return ConvexSet::box(head, tail);
      }
      if (kind == "halfspace") {
        if (head.empty() || tail.size() != 1)
          return fail("expected 'halfspace <a...> : <c>'");
        return ConvexSet::halfspace(head, tail[0]);
      }
      if (kind == "hyperplane") {
        if (head.empty() || tail.size() != 1)
          return fail("expected 'hyperplane <a...> : <b>'");
        return ConvexSet::hyperplane(head, tail[0]);
      }
      if (kind == "ball") {
        if (head.empty() || tail.size() != 1)
          return fail("expected 'ball <center...> : <r>'");
        return ConvexSet::ball(head, tail[0]);
      }
    } catch (const std::exception& e) {
      return fail(e.what());
    }
    return fail("unknown set kind '" + kind + "'");
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string set_text(const ConvexSet& s) {
  std::ostringstream o;
  switch (s.kind) {
    case SetKind::whole:
      o << "whole " << s.dim;
      break;
    case SetKind::box: {
      o << "box";
      for (double v : s.lo) o << " " << fmt(v);
      o << " :";
      for (double v : s.hi) o << " " << fmt(v);
      break;
    }
    case SetKind::halfspace:
    case SetKind::hyperplane: {
      o << (s.kind == SetKind::halfspace ? "halfspace" : "hyperplane");
      for (double v : s.normal) o << " " << fmt(v);
      o << " : " << fmt(s.rhs);
      break;
    }
    case SetKind::ball: {
      o << "ball";
      for (double v : s.center) o << " " << fmt(v);
      o << " : " << fmt(s.radius);
      break;
    }
  }
  return o.str();
}

}  // namespace

Matrix load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<double> row;
    double v;
    while (ss >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty matrix file " + path);
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size())
      throw std::runtime_error("ragged rows in matrix file " + path);
    for (size_t c = 0; c < rows[r].size(); ++c)
      m.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
  }
  return m;
}

std::vector<double> load_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file " + path);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (out.empty()) throw std::runtime_error("empty vector file " + path);
  return out;
}

ParseResult parse_config_text(const std::string& text,
                              const std::string& base_dir) {
  ParseResult res;
  Parser pp{res.errors};
  ExperimentConfig cfg;

  // problem-section holders
  std::string kind_text;
  std::vector<double> v_point;
  std::optional<ConvexSet> omega0;
  std::vector<ConvexSet> constraints;
  std::string matrix_file, rhs_file;
  std::vector<double> rhs_inline;
  std::optional<double> lambda;
  std::vector<NumSource> sources;
  std::vector<double> capacities;
  std::vector<std::vector<int>> link_sources;

  bool alpha_seen = false;
  std::string delay_kind = "zero";
  long delay_period = 1, delay_tau = 0;
  std::uint64_t delay_seed = 0;

  std::string section;
  std::istringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        res.errors.push_back({line, "line " + std::to_string(line) +
                                        ": malformed section header"});
        continue;
      }
      section = s.substr(1, s.size() - 2);
      if (section != "problem" && section != "method" && section != "delay" &&
          section != "run")
        res.errors.push_back({line, "line " + std::to_string(line) +
                                        ": unknown section [" + section + "]"});
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) {
      res.errors.push_back(
          {line, "line " + std::to_string(line) + ": expected key = value"});
      continue;
    }
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));

    auto unknown = [&]() {
      res.errors.push_back({line, "line " + std::to_string(line) +
                                      ": unknown key '" + key + "' in [" +
                                      section + "]"});
    };

    if (section == "problem") {
      if (key == "kind") {
        kind_text = val;
      } else if (key == "v") {
        v_point = pp.to_double_list(val, line, "v");
      } else if (key == "omega0") {
        omega0 = pp.to_set(val, line, "omega0");
      } else if (key == "constraint") {
        auto s2 = pp.to_set(val, line, "constraint");
        if (s2) constraints.push_back(*s2);
      } else if (key == "matrix_file") {
        matrix_file = join_path(base_dir, val);
      } else if (key == "rhs_file") {
        rhs_file = join_path(base_dir, val);
      } else if (key == "rhs") {
        rhs_inline = pp.to_double_list(val, line, "rhs");
      } else if (key == "lambda") {
        double d;
        if (pp.to_double(val, line, "lambda", d)) lambda = d;
      } else if (key == "source") {
        // "log : M" or "quad q p : M"
        auto toks = split_tokens(val);
        NumSource src;
        bool ok = toks.size() >= 3;
        if (ok && toks[0] == "log" && toks.size() == 3 && toks[1] == ":") {
          src.utility = UtilityKind::log1p;
          ok = pp.to_double(toks[2], line, "source", src.cap);
        } else if (ok && toks[0] == "quad" && toks.size() == 5 &&
                   toks[3] == ":") {
          src.utility = UtilityKind::concave_quadratic;
          ok = pp.to_double(toks[1], line, "source", src.q) &&
               pp.to_double(toks[2], line, "source", src.p) &&
               pp.to_double(toks[4], line, "source", src.cap);
        } else {
          ok = false;
        }
        if (ok) {
          sources.push_back(src);
        } else {
          res.errors.push_back(
              {line, "line " + std::to_string(line) +
                         ": expected 'log : M' or 'quad q p : M'"});
        }
      } else if (key == "link") {
        // "capacity : s0 s1 ..."
        auto toks = split_tokens(val);
        bool ok = toks.size() >= 3 && toks[1] == ":";
        double cap = 0.0;
        std::vector<int> members;
        if (ok) ok = pp.to_double(toks[0], line, "link", cap);
        for (size_t t = 2; ok && t < toks.size(); ++t) {
          long idx;
          if (!pp.to_long(toks[t], line, "link", idx))
            ok = false;
          else
            members.push_back(static_cast<int>(idx));
        }
        if (ok) {
          capacities.push_back(cap);
          link_sources.push_back(std::move(members));
        } else if (toks.size() < 3 || toks[1] != ":") {
          res.errors.push_back({line, "line " + std::to_string(line) +
                                          ": expected 'capacity : sources...'"});
        }
      } else {
        unknown();
      }
    } else if (section == "method") {
      if (key == "method") {
        if (val == "rdciag") cfg.method = Method::rdciag;
        else if (val == "dbcd") cfg.method = Method::dbcd;
        else if (val == "dual_pg") cfg.method = Method::dual_pg;
        else if (val == "piag") cfg.method = Method::piag;
        else if (val == "sparse_kaczmarz") cfg.method = Method::sparse_kaczmarz;
        else
          res.errors.push_back({line, "line " + std::to_string(line) +
                                          ": unknown method '" + val + "'"});
      } else if (key == "alpha") {
        alpha_seen = true;
        if (val == "auto") {
          cfg.alpha_auto = true;
        } else {
          double d;
          if (pp.to_double(val, line, "alpha", d)) {
            if (d <= 0.0)
              res.errors.push_back({line, "line " + std::to_string(line) +
                                              ": alpha must be > 0"});
            cfg.alpha = d;
          }
        }
      } else if (key == "sigma") {
        double d;
        if (pp.to_double(val, line, "sigma", d)) {
          if (d <= 0.0)
            res.errors.push_back({line, "line " + std::to_string(line) +
                                            ": sigma must be > 0"});
          cfg.sigma = d;
        }
      } else {
        unknown();
      }
    } else if (section == "delay") {
      if (key == "kind") {
        delay_kind = val;
        if (val != "zero" && val != "cyclic" && val != "random_bounded")
          res.errors.push_back({line, "line " + std::to_string(line) +
                                          ": unknown delay kind '" + val + "'"});
      } else if (key == "period") {
        if (pp.to_long(val, line, "period", delay_period) && delay_period < 1)
          res.errors.push_back({line, "line " + std::to_string(line) +
                                          ": period must be >= 1"});
      } else if (key == "tau") {
        if (pp.to_long(val, line, "tau", delay_tau) && delay_tau < 0)
          res.errors.push_back({line, "line " + std::to_string(line) +
                                          ": tau must be >= 0"});
      } else if (key == "seed") {
        pp.to_u64(val, line, "seed", delay_seed);
      } else {
        unknown();
      }
    } else if (section == "run") {
      if (key == "seeds") {
        cfg.seeds.clear();
        std::string item;
        std::istringstream ls(val);
        while (std::getline(ls, item, ',')) {
          item = trim(item);
          if (item.empty()) continue;
          std::uint64_t u;
          if (pp.to_u64(item, line, "seeds", u)) cfg.seeds.push_back(u);
        }
        if (cfg.seeds.empty())
          res.errors.push_back({line, "line " + std::to_string(line) +
                                          ": seeds list is empty"});
      } else if (key == "max_iter") {
        if (pp.to_long(val, line, "max_iter", cfg.max_iter) && cfg.max_iter < 1)
          res.errors.push_back({line, "line " + std::to_string(line) +
                                          ": max_iter must be >= 1"});
      } else if (key == "gap_tol") {
        double d;
        if (pp.to_double(val, line, "gap_tol", d)) {
          if (d < 0.0)
            res.errors.push_back({line, "line " + std::to_string(line) +
                                            ": gap_tol must be >= 0"});
          cfg.gap_tol = d;
        }
      } else if (key == "record_every") {
        if (pp.to_long(val, line, "record_every", cfg.record_every) &&
            cfg.record_every < 0)
          res.errors.push_back({line, "line " + std::to_string(line) +
                                          ": record_every must be >= 0"});
      } else if (key == "reference") {
        cfg.reference = join_path(base_dir, val);
      } else if (key == "out_dir") {
        cfg.out_dir = val;
      } else if (key == "timing") {
        if (val == "on") cfg.timing = true;
        else if (val == "off") cfg.timing = false;
        else
          res.errors.push_back({line, "line " + std::to_string(line) +
                                          ": timing must be on or off"});
      } else {
        unknown();
      }
    } else {
      res.errors.push_back({line, "line " + std::to_string(line) +
                                      ": key outside any section"});
    }
  }

  // assemble the problem spec
  if (kind_text == "best_approx") {
    cfg.problem_kind = ProblemKind::best_approx;
    BestApproxSpec spec;
    if (v_point.empty())
      res.errors.push_back({0, "best_approx: missing 'v'"});
    spec.v = v_point;
    spec.omega0 =
        omega0.value_or(ConvexSet::whole_space(static_cast<int>(v_point.size())));
    spec.constraints = constraints;
    cfg.problem = std::move(spec);
  } else if (kind_text == "aug_l1") {
    cfg.problem_kind = ProblemKind::aug_l1;
    AugL1Spec spec;
    if (matrix_file.empty()) {
      res.errors.push_back({0, "aug_l1: missing 'matrix_file'"});
    } else {
      try {
        spec.A = load_matrix_file(matrix_file);
      } catch (const std::exception& e) {
        res.errors.push_back({0, e.what()});
      }
    }
    if (!rhs_file.empty()) {
      try {
        spec.b = load_vector_file(rhs_file);
      } catch (const std::exception& e) {
        res.errors.push_back({0, e.what()});
      }
    } else if (!rhs_inline.empty()) {
      spec.b = rhs_inline;
    } else {
      res.errors.push_back({0, "aug_l1: missing 'rhs' or 'rhs_file'"});
    }
    if (!lambda) {
      res.errors.push_back({0, "aug_l1: missing 'lambda'"});
    } else if (*lambda <= 0.0) {
      res.errors.push_back({0, "aug_l1: lambda must be > 0"});
    } else {
      spec.lambda = *lambda;
    }
    if (spec.A.rows > 0 && static_cast<int>(spec.b.size()) != spec.A.rows)
      res.errors.push_back({0, "aug_l1: rhs length does not match matrix rows"});
    cfg.matrix_file = matrix_file;
    cfg.rhs_file = rhs_file;
    cfg.problem = std::move(spec);
  } else if (kind_text == "num") {
    cfg.problem_kind = ProblemKind::num;
    NumSpec spec;
    spec.sources = sources;
    spec.capacities = capacities;
    spec.link_sources = link_sources;
    if (sources.empty()) res.errors.push_back({0, "num: no sources"});
    if (capacities.empty()) res.errors.push_back({0, "num: no links"});
    if (!lambda) {
      res.errors.push_back({0, "num: missing 'lambda'"});
    } else if (*lambda <= 0.0) {
      res.errors.push_back({0, "num: lambda must be > 0"});
    } else {
      spec.lambda = *lambda;
    }
    cfg.problem = std::move(spec);
  } else if (kind_text.empty()) {
    res.errors.push_back({0, "[problem] kind is missing"});
  } else {
    res.errors.push_back({0, "unknown problem kind '" + kind_text + "'"});
  }

  // delay schedule
  if (delay_kind == "zero") {
    cfg.delay = DelaySchedule::zero();
  } else if (delay_kind == "cyclic") {
    cfg.delay = DelaySchedule::cyclic(static_cast<int>(delay_period));
  } else if (delay_kind == "random_bounded") {
    cfg.delay = DelaySchedule::random_bounded(static_cast<int>(delay_tau),
                                              delay_seed);
  }

  // cross-field invariants
  if (!alpha_seen && cfg.method != Method::sparse_kaczmarz)
    cfg.alpha_auto = true;  // default
  if (cfg.alpha_auto && !cfg.sigma && cfg.reference.empty())
    res.errors.push_back(
        {0, "alpha = auto needs 'sigma' or a 'reference' to estimate it"});
  if (!cfg.alpha_auto && cfg.alpha <= 0.0 &&
      cfg.method != Method::sparse_kaczmarz)
    res.errors.push_back({0, "alpha must be set positive or 'auto'"});
  if (cfg.seeds.empty() && cfg.method != Method::dual_pg &&
      cfg.method != Method::piag)
    res.errors.push_back({0, "randomized methods need a nonempty seeds list"});

  if (res.errors.empty()) res.config = std::move(cfg);
  return res;
}

ParseResult parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.errors.push_back({0, "cannot open config file " + path});
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string dir = ".";
  size_t slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return parse_config_text(buf.str(), dir);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream o;
  o << "[problem]\n";
  switch (cfg.problem_kind) {
    case ProblemKind::best_approx: {
      const auto& s = std::get<BestApproxSpec>(cfg.problem);
      o << "kind = best_approx\n";
      o << "v = ";
      for (size_t i = 0; i < s.v.size(); ++i)
        o << (i ? ", " : "") << fmt(s.v[i]);
      o << "\n";
      o << "omega0 = " << set_text(s.omega0) << "\n";
      for (const auto& c : s.constraints)
        o << "constraint = " << set_text(c) << "\n";
      break;
    }
    case ProblemKind::aug_l1: {
      const auto& s = std::get<AugL1Spec>(cfg.problem);
      o << "kind = aug_l1\n";
      o << "matrix_file = " << cfg.matrix_file << "\n";
      if (!cfg.rhs_file.empty()) {
        o << "rhs_file = " << cfg.rhs_file << "\n";
      } else {
        o << "rhs = ";
        for (size_t i = 0; i < s.b.size(); ++i)
          o << (i ? ", " : "") << fmt(s.b[i]);
        o << "\n";
      }
      o << "lambda = " << fmt(s.lambda) << "\n";
      break;
    }
    case ProblemKind::num: {
      const auto& s = std::get<NumSpec>(cfg.problem);
      o << "kind = num\n";
      o << "lambda = " << fmt(s.lambda) << "\n";
      for (const auto& src : s.sources) {
        if (src.utility == UtilityKind::log1p)
          o << "source = log : " << fmt(src.cap) << "\n";
        else
          o << "source = quad " << fmt(src.q) << " " << fmt(src.p) << " : "
            << fmt(src.cap) << "\n";
      }
      for (size_t l = 0; l < s.capacities.size(); ++l) {
        o << "link = " << fmt(s.capacities[l]) << " :";
        for (int m : s.link_sources[l]) o << " " << m;
        o << "\n";
      }
      break;
    }
  }
  o << "\n[method]\n";
  o << "method = " << method_name(cfg.method) << "\n";
  if (cfg.alpha_auto)
    o << "alpha = auto\n";
  else
    o << "alpha = " << fmt(cfg.alpha) << "\n";
  if (cfg.sigma) o << "sigma = " << fmt(*cfg.sigma) << "\n";

  o << "\n[delay]\n";
  switch (cfg.delay.kind) {
    case DelaySchedule::Kind::zero:
      o << "kind = zero\n";
      break;
    case DelaySchedule::Kind::cyclic:
      o << "kind = cyclic\nperiod = " << cfg.delay.period << "\n";
      break;
    case DelaySchedule::Kind::random_bounded:
      o << "kind = random_bounded\ntau = " << cfg.delay.tau_max
        << "\nseed = " << cfg.delay.seed << "\n";
      break;
  }

  o << "\n[run]\n";
  o << "seeds = ";
  for (size_t i = 0; i < cfg.seeds.size(); ++i)
    o << (i ? ", " : "") << cfg.seeds[i];
  o << "\n";
  o << "max_iter = " << cfg.max_iter << "\n";
  o << "gap_tol = " << fmt(cfg.gap_tol) << "\n";
  o << "record_every = " << cfg.record_every << "\n";
  if (!cfg.reference.empty()) o << "reference = " << cfg.reference << "\n";
  o << "out_dir = " << cfg.out_dir << "\n";
  o << "timing = " << (cfg.timing ? "on" : "off") << "\n";
  return o.str();
}

}  // namespace rdciag
