#include "recsim/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace recsim {

const char* to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::static_solve: return "static";
    case ExperimentMode::learn: return "learn";
    case ExperimentMode::coupled: return "coupled";
    case ExperimentMode::oracle: return "oracle";
    case ExperimentMode::check: return "check";
  }
  return "static";
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  const char* b = tok.data();
  const char* e = b + tok.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && ptr == e && std::isfinite(out);
}

bool parse_doubles(const std::string& value, std::vector<double>& out) {
  out.clear();
  for (const auto& tok : tokens(value)) {
    double v;
    if (!parse_double(tok, v)) return false;
    out.push_back(v);
  }
  return !out.empty();
}

bool is_number_row(const std::string& line) {
  std::vector<double> tmp;
  return parse_doubles(line, tmp);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += " ";
    out += fmt(v[i]);
  }
  return out;
}

const char* type_token(InfluenceType t) {
  switch (t) {
    case InfluenceType::type_a: return "A";
    case InfluenceType::type_b: return "B";
    case InfluenceType::none: return "none";
  }
  return "none";
}

}  // namespace

ParseResult parse_config(const std::string& text) {
  ParseResult result;
  auto& errors = result.errors;

  std::map<std::string, std::string> kv;
  std::vector<std::vector<double>> p_rows;

  std::istringstream in(text);
  std::string raw;
  bool in_matrix = false;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') {
      in_matrix = false;
      continue;
    }
    if (line == "P:") {
      in_matrix = true;
      p_rows.clear();
      continue;
    }
    if (in_matrix && is_number_row(line)) {
      std::vector<double> row;
      parse_doubles(line, row);
      p_rows.push_back(std::move(row));
      continue;
    }
    in_matrix = false;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      errors.push_back("line " + std::to_string(line_no) + ": empty key or value");
      continue;
    }
    if (kv.count(key)) errors.push_back("duplicate key: " + key);
    kv[key] = value;
  }

  ExperimentConfig c;

  auto take = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_number = [&](const char* key, double& dst) {
    if (auto v = take(key)) {
      if (!parse_double(*v, dst)) errors.push_back(std::string(key) + ": not a number: " + *v);
    }
  };
  auto take_count = [&](const char* key, std::size_t& dst) {
    double d;
    if (auto v = take(key)) {
      if (!parse_double(*v, d) || d < 0 || d != std::floor(d))
        errors.push_back(std::string(key) + ": not a non-negative integer: " + *v);
      else
        dst = static_cast<std::size_t>(d);
    }
  };
  auto take_vector = [&](const char* key) -> std::optional<std::vector<double>> {
    if (auto v = take(key)) {
      std::vector<double> nums;
      if (!parse_doubles(*v, nums)) {
        errors.push_back(std::string(key) + ": expected a list of numbers");
        return std::nullopt;
      }
      return nums;
    }
    return std::nullopt;
  };

  // mode
  if (auto v = take("mode")) {
    if (*v == "static") c.mode = ExperimentMode::static_solve;
    else if (*v == "learn") c.mode = ExperimentMode::learn;
    else if (*v == "coupled") c.mode = ExperimentMode::coupled;
    else if (*v == "oracle") c.mode = ExperimentMode::oracle;
    else if (*v == "check") c.mode = ExperimentMode::check;
    else errors.push_back("mode: unknown mode '" + *v + "'");
  } else {
    errors.push_back("mode: required key missing");
  }

  // model
  if (p_rows.empty()) {
    errors.push_back("P: publishing matrix block missing");
  } else {
    const std::size_t n = p_rows.front().size();
    bool ragged = false;
    for (const auto& row : p_rows) ragged = ragged || row.size() != n;
    if (ragged) {
      errors.push_back("P: rows have inconsistent lengths");
    } else {
      c.model.sites = p_rows.size();
      c.model.topics = n;
      for (const auto& row : p_rows)
        c.model.publishing.insert(c.model.publishing.end(), row.begin(), row.end());
    }
  }
  if (auto v = take_vector("r")) c.model.reward = *v;
  else errors.push_back("r: reward vector missing");
  take_number("kappa", c.model.kappa);
  take_number("epsilon", c.model.epsilon);

  if (auto v = take_vector("theta")) c.theta = InterestProfile{*v};

  // influence block
  std::optional<std::vector<double>> xi = take_vector("xi");
  std::optional<std::vector<double>> beta = take_vector("beta");
  std::optional<std::string> types = take("influence_types");
  if (xi || beta || types) {
    if (!xi) {
      errors.push_back("xi: required alongside influence_types/beta");
    } else {
      InfluenceSpec inf;
      inf.topics.resize(xi->size());
      for (std::size_t i = 0; i < xi->size(); ++i) inf.topics[i].xi = (*xi)[i];
      if (beta) {
        if (beta->size() == 1) {
          for (auto& t : inf.topics) t.beta = beta->front();
        } else if (beta->size() == xi->size()) {
          for (std::size_t i = 0; i < xi->size(); ++i) inf.topics[i].beta = (*beta)[i];
        } else {
          errors.push_back("beta: length must be 1 or match xi");
        }
      }
      if (types) {
        const auto toks = tokens(*types);
        auto apply = [&](std::size_t i, const std::string& t) {
          if (t == "A") inf.topics[i].type = InfluenceType::type_a;
          else if (t == "B") inf.topics[i].type = InfluenceType::type_b;
          else if (t == "none") inf.topics[i].type = InfluenceType::none;
          else errors.push_back("influence_types: unknown type '" + t + "'");
        };
        if (toks.size() == 1) {
          for (std::size_t i = 0; i < inf.topics.size(); ++i) apply(i, toks.front());
        } else if (toks.size() == inf.topics.size()) {
          for (std::size_t i = 0; i < toks.size(); ++i) apply(i, toks[i]);
        } else {
          errors.push_back("influence_types: length must be 1 or match xi");
        }
      }
      c.influence = std::move(inf);
    }
  }
  if (auto v = take("v_floor")) {
    double d;
    if (!parse_double(*v, d)) {
      errors.push_back("v_floor: not a number: " + *v);
    } else {
      if (!c.influence) c.influence = InfluenceSpec{};
      c.influence->v_floor = d;
    }
  }

  // schedules and run shape
  take_number("a0", c.a0);
  take_number("a_exp", c.a_exp);
  take_number("b0", c.b0);
  take_number("b_exp", c.b_exp);
  if (auto v = take("compare_timescales")) {
    if (*v == "true") c.compare_timescales = true;
    else if (*v == "false") c.compare_timescales = false;
    else errors.push_back("compare_timescales: expected true or false");
  }
  take_number("a2_0", c.a2_0);
  take_number("a2_exp", c.a2_exp);
  take_number("b2_0", c.b2_0);
  take_number("b2_exp", c.b2_exp);
  take_count("sessions", c.sessions);
  take_count("decimate", c.decimate);
  take_count("starts", c.starts);
  take_count("max_iters", c.max_iters);
  take_number("tol", c.tol);
  take_number("resolution", c.resolution);
  take_number("fine_resolution", c.fine_resolution);
  take_number("tol_abs", c.policy.tol_abs);
  take_count("l_max", c.policy.l_max);
  take_count("jobs", c.jobs);

  if (auto v = take("seeds")) {
    std::vector<double> nums;
    if (!parse_doubles(*v, nums)) {
      errors.push_back("seeds: expected a list of integers");
    } else {
      c.seeds.clear();
      for (double d : nums) {
        if (d < 0 || d != std::floor(d)) {
          errors.push_back("seeds: entries must be non-negative integers");
          break;
        }
        c.seeds.push_back(static_cast<std::uint64_t>(d));
      }
    }
  }

  if (auto v = take("x0")) {
    if (*v == "uniform") {
      c.x0.reset();
      c.x0_random = false;
    } else if (*v == "random") {
      c.x0_random = true;
    } else {
      std::vector<double> nums;
      if (!parse_doubles(*v, nums)) errors.push_back("x0: expected uniform, random, or numbers");
      else c.x0 = Strategy{nums};
    }
  }
  if (auto v = take("theta0")) {
    if (*v != "uniform") {
      std::vector<double> nums;
      if (!parse_doubles(*v, nums)) errors.push_back("theta0: expected uniform or numbers");
      else c.theta0 = InterestProfile{nums};
    }
  }
  if (auto v = take_vector("x_ref")) c.x_ref = Strategy{*v};
  if (auto v = take("coupled_mode")) {
    if (*v == "two_timescale") c.coupled_mode = CoupledMode::two_timescale;
    else if (*v == "joint") c.coupled_mode = CoupledMode::joint;
    else errors.push_back("coupled_mode: expected two_timescale or joint");
  }
  if (auto v = take("out")) c.out_dir = *v;
  if (auto v = take("preset")) c.preset = *v;

  for (const auto& [key, value] : kv) errors.push_back("unknown key: " + key);

  // Cross-field validation; runs even when earlier keys failed so the caller
  // sees every problem at once (guarded on the model having parsed at all).
  if (c.model.sites > 0) {
    try {
      validate(c.model);
    } catch (const error& e) {
      errors.push_back(std::string("model: ") + e.what());
    }
    if (c.theta && c.theta->theta.size() != c.model.topics)
      errors.push_back("theta: length does not match the number of topics (columns of P)");
    else if (c.theta && !is_simplex(c.theta->theta))
      errors.push_back("theta: not a probability vector");
    if (c.influence && c.influence->topics.size() != c.model.topics)
      errors.push_back("xi: length does not match the number of topics (columns of P)");
    if (c.x0 && c.x0->x.size() != c.model.sites)
      errors.push_back("x0: length does not match the number of sites (rows of P)");
    if (c.x_ref && c.x_ref->x.size() != c.model.sites)
      errors.push_back("x_ref: length does not match the number of sites (rows of P)");
    if (c.theta0 && c.theta0->theta.size() != c.model.topics)
      errors.push_back("theta0: length does not match the number of topics");

    const bool needs_theta = c.mode == ExperimentMode::static_solve ||
                             c.mode == ExperimentMode::learn ||
                             c.mode == ExperimentMode::oracle || c.mode == ExperimentMode::check;
    if (needs_theta && !c.theta)
      errors.push_back("theta: required for mode " + std::string(to_string(c.mode)));
    if (c.mode == ExperimentMode::coupled && !c.influence)
      errors.push_back("xi/influence_types: required for mode coupled");
    if (c.mode == ExperimentMode::coupled && c.influence) {
      try {
        validate(c.model, *c.influence);
      } catch (const error& e) {
        errors.push_back(std::string("influence: ") + e.what());
      }
    }
    if (c.seeds.empty()) errors.push_back("seeds: at least one seed required");
    if (c.mode == ExperimentMode::learn || c.mode == ExperimentMode::coupled) {
      try {
        StepSchedule::learning(c.a0, c.a_exp);
      } catch (const error& e) {
        errors.push_back(std::string("a0/a_exp: ") + e.what());
      }
    }
    if (c.mode == ExperimentMode::coupled) {
      try {
        StepSchedule::influence(c.b0, c.b_exp);
      } catch (const error& e) {
        errors.push_back(std::string("b0/b_exp: ") + e.what());
      }
    }
  }

  if (errors.empty()) result.config = std::move(c);
  return result;
}

std::string render_config(const ExperimentConfig& c) {
  std::string out;
  out += "mode = " + std::string(to_string(c.mode)) + "\n";
  if (!c.preset.empty()) out += "preset = " + c.preset + "\n";
  out += "kappa = " + fmt(c.model.kappa) + "\n";
  out += "epsilon = " + fmt(c.model.epsilon) + "\n";
  out += "P:\n";
  for (std::size_t m = 0; m < c.model.sites; ++m) {
    for (std::size_t n = 0; n < c.model.topics; ++n) {
      if (n) out += " ";
      out += fmt(c.model.p(m, n));
    }
    out += "\n";
  }
  out += "r = " + fmt_list(c.model.reward) + "\n";
  if (c.theta) out += "theta = " + fmt_list(c.theta->theta) + "\n";
  if (c.influence) {
    std::string xi, beta, types;
    for (std::size_t n = 0; n < c.influence->topics.size(); ++n) {
      if (n) {
        xi += " ";
        beta += " ";
        types += " ";
      }
      xi += fmt(c.influence->topics[n].xi);
      beta += fmt(c.influence->topics[n].beta);
      types += type_token(c.influence->topics[n].type);
    }
    out += "xi = " + xi + "\n";
    out += "beta = " + beta + "\n";
    out += "influence_types = " + types + "\n";
    out += "v_floor = " + fmt(c.influence->v_floor) + "\n";
  }
  out += "a0 = " + fmt(c.a0) + "\n";
  out += "a_exp = " + fmt(c.a_exp) + "\n";
  out += "b0 = " + fmt(c.b0) + "\n";
  out += "b_exp = " + fmt(c.b_exp) + "\n";
  out += std::string("compare_timescales = ") + (c.compare_timescales ? "true" : "false") + "\n";
  if (c.compare_timescales) {
    out += "a2_0 = " + fmt(c.a2_0) + "\n";
    out += "a2_exp = " + fmt(c.a2_exp) + "\n";
    out += "b2_0 = " + fmt(c.b2_0) + "\n";
    out += "b2_exp = " + fmt(c.b2_exp) + "\n";
  }
  out += "sessions = " + std::to_string(c.sessions) + "\n";
  std::string seeds;
  for (std::size_t i = 0; i < c.seeds.size(); ++i) {
    if (i) seeds += " ";
    seeds += std::to_string(c.seeds[i]);
  }
  out += "seeds = " + seeds + "\n";
  if (c.x0) out += "x0 = " + fmt_list(c.x0->x) + "\n";
  else if (c.x0_random) out += "x0 = random\n";
  else out += "x0 = uniform\n";
  if (c.theta0) out += "theta0 = " + fmt_list(c.theta0->theta) + "\n";
  if (c.x_ref) out += "x_ref = " + fmt_list(c.x_ref->x) + "\n";
  out += "decimate = " + std::to_string(c.decimate) + "\n";
  out += "starts = " + std::to_string(c.starts) + "\n";
  out += "max_iters = " + std::to_string(c.max_iters) + "\n";
  out += "tol = " + fmt(c.tol) + "\n";
  out += "resolution = " + fmt(c.resolution) + "\n";
  out += "fine_resolution = " + fmt(c.fine_resolution) + "\n";
  out += std::string("coupled_mode = ") +
         (c.coupled_mode == CoupledMode::joint ? "joint" : "two_timescale") + "\n";
  out += "tol_abs = " + fmt(c.policy.tol_abs) + "\n";
  out += "l_max = " + std::to_string(c.policy.l_max) + "\n";
  out += "jobs = " + std::to_string(c.jobs) + "\n";
  out += "out = " + c.out_dir + "\n";
  return out;
}

}  // namespace recsim
