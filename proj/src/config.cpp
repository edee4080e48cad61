#include "gradkit/config.hpp"

#include <charconv>
#include <fstream>

namespace gradkit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ConfigError("bad value '" + value + "' for key '" + key + "'");
  }
  return out;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::int64_t out = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ConfigError("bad value '" + value + "' for key '" + key + "'");
  }
  return out;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ConfigError("bad value '" + value + "' for key '" + key + "'");
  }
  return out;
}

void apply_problem_key(ProblemSpec& p, const std::string& key, const std::string& value) {
  if (key == "name") {
    if (value != "quadratic" && value != "rosenbrock" && value != "logreg" &&
        value != "mlp") {
      throw ConfigError("unknown problem '" + value + "'");
    }
    p.name = value;
  } else if (key == "dim") {
    p.dim = static_cast<std::ptrdiff_t>(parse_int(key, value));
  } else if (key == "condition_number") {
    p.condition_number = parse_real(key, value);
  } else if (key == "n_examples") {
    p.n_examples = parse_int(key, value);
  } else if (key == "n_features") {
    p.n_features = parse_int(key, value);
  } else if (key == "hidden_units") {
    p.hidden_units = parse_int(key, value);
  } else if (key == "seed") {
    p.seed = parse_seed(key, value);
  } else if (key == "images") {
    p.images = value;
  } else if (key == "labels") {
    p.labels = value;
  } else {
    throw ConfigError("unknown key '" + key + "' in [problem]");
  }
}

void apply_run_key(CliConfig& c, const std::string& key, const std::string& value) {
  if (key == "epochs") {
    c.epochs = parse_int(key, value);
  } else if (key == "batch_size") {
    c.batch_size = parse_int(key, value);
  } else if (key == "seed") {
    c.seed = parse_seed(key, value);
  } else if (key == "schedule") {
    if (value == "constant") {
      c.schedule.kind = Schedule::Kind::constant;
    } else if (value == "inverse-t") {
      c.schedule.kind = Schedule::Kind::inverse_t;
    } else if (value == "step") {
      c.schedule.kind = Schedule::Kind::step;
    } else {
      throw ConfigError("bad value '" + value + "' for key 'schedule'");
    }
  } else if (key == "decay") {
    c.schedule.decay = parse_real(key, value);
  } else if (key == "factor") {
    c.schedule.factor = parse_real(key, value);
  } else if (key == "every") {
    c.schedule.every = parse_int(key, value);
  } else if (key == "granularity") {
    if (value == "per-step") {
      c.granularity = Granularity::per_step;
    } else if (value == "per-epoch") {
      c.granularity = Granularity::per_epoch;
    } else {
      throw ConfigError("bad value '" + value + "' for key 'granularity'");
    }
  } else if (key == "threshold") {
    c.loss_threshold = parse_real(key, value);
  } else {
    throw ConfigError("unknown key '" + key + "' in [run]");
  }
}

void apply_optimizer_key(HyperParams& h, const std::string& key,
                         const std::string& value, const std::string& section) {
  if (key == "epsilon") {
    h.epsilon = parse_real(key, value);
  } else if (key == "alpha") {
    h.alpha = parse_real(key, value);
  } else if (key == "rho") {
    h.rho = parse_real(key, value);
  } else if (key == "rho1") {
    h.rho1 = parse_real(key, value);
  } else if (key == "rho2") {
    h.rho2 = parse_real(key, value);
  } else if (key == "delta") {
    h.delta = parse_real(key, value);
  } else {
    throw ConfigError("unknown key '" + key + "' in [" + section + "]");
  }
}

}  // namespace

CliConfig parse_config_text(const std::string& text) {
  CliConfig cfg;
  enum class Section { none, problem, run, optimizer };
  Section section = Section::none;
  std::size_t opt_index = 0;

  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
      }
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "problem") {
        section = Section::problem;
      } else if (name == "run") {
        section = Section::run;
      } else if (name.rfind("optimizer.", 0) == 0) {
        const std::string algo_str = name.substr(std::string("optimizer.").size());
        Algo algo;
        try {
          algo = parse_algo(algo_str);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
        for (const auto& [existing, hp] : cfg.optimizers) {
          if (existing == algo) {
            throw ConfigError("duplicate section [" + name + "]");
          }
        }
        cfg.optimizers.emplace_back(algo, default_hyperparams(algo));
        opt_index = cfg.optimizers.size() - 1;
        section = Section::optimizer;
      } else {
        throw ConfigError("unknown section [" + name + "]");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
    }

    switch (section) {
      case Section::none:
        throw ConfigError("key '" + key + "' appears before any section");
      case Section::problem:
        apply_problem_key(cfg.problem, key, value);
        break;
      case Section::run:
        apply_run_key(cfg, key, value);
        break;
      case Section::optimizer:
        apply_optimizer_key(cfg.optimizers[opt_index].second, key, value,
                            "optimizer." +
                                std::string(algo_name(cfg.optimizers[opt_index].first)));
        break;
    }
  }

  if (cfg.optimizers.empty()) {
    throw ConfigError("config declares no [optimizer.<name>] section");
  }
  return cfg;
}

CliConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

std::vector<RunConfig> to_run_configs(const CliConfig& cfg) {
  std::vector<RunConfig> out;
  out.reserve(cfg.optimizers.size());
  for (const auto& [algo, hp] : cfg.optimizers) {
    RunConfig rc;
    rc.algo = algo;
    rc.hp = hp;
    rc.schedule = cfg.schedule;
    rc.epochs = cfg.epochs;
    rc.batch_size = cfg.batch_size;
    rc.seed = cfg.seed;
    rc.problem = cfg.problem;
    rc.granularity = cfg.granularity;
    rc.loss_threshold = cfg.loss_threshold;
    out.push_back(std::move(rc));
  }
  return out;
}

}  // namespace gradkit
