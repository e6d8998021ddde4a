#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "palsgd/experiments.hpp"

namespace palsgd {
namespace {

std::string value_label(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string cell_dir_name(std::size_t index, const SweepCell& cell) {
  std::string name = "cell_" + std::to_string(index);
  for (std::size_t i = 0; i < cell.params.size(); ++i) {
    name += "__" + cell.params[i] + "=" + value_label(cell.values[i]);
  }
  for (char& c : name)
    if (c == '/' || c == ' ' || c == '"' || c == '[' || c == ']' || c == ',') c = '_';
  return name;
}

}  // namespace

void set_dotted(Json& doc, const std::string& path, const Json& value) {
  if (path.empty()) throw ConfigError("<grid>", "empty parameter path");
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError(path, "malformed parameter path");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError(path, "path crosses a non-object value");
      *node = Json::object();
    }
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

std::vector<SweepCell> sweep(const Json& base, const Json& grid,
                             const std::optional<std::filesystem::path>& out_dir,
                             std::size_t jobs) {
  if (!grid.is_object() || grid.empty()) throw ConfigError("<grid>", "expected a non-empty object");
  std::vector<std::string> names;
  std::vector<std::vector<Json>> axes;
  for (const auto& [key, values] : grid.items()) {
    if (!values.is_array() || values.empty())
      throw ConfigError(key, "grid values must be a non-empty list");
    names.push_back(key);
    axes.emplace_back(values.begin(), values.end());
  }

  // Cartesian product, last axis fastest.
  std::vector<SweepCell> cells;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    SweepCell cell;
    cell.params = names;
    for (std::size_t a = 0; a < axes.size(); ++a) cell.values.push_back(axes[a][idx[a]]);
    cells.push_back(std::move(cell));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].size()) break;
      idx[a] = 0;
      if (a == 0) goto done;
    }
  }
done:

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      SweepCell& cell = cells[i];
      try {
        Json doc = base;
        for (std::size_t a = 0; a < cell.params.size(); ++a) set_dotted(doc, cell.params[a], cell.values[a]);
        const RunConfig cfg = parse_config(doc);
        std::optional<std::filesystem::path> dir;
        if (out_dir) dir = *out_dir / cell_dir_name(i, cell);
        cell.summary = run_experiment(cfg, dir).summary;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(jobs, cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < n_threads; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    std::ofstream csv(*out_dir / "sweep.csv");
    if (!csv) throw std::runtime_error("cannot write sweep.csv");
    write_sweep_csv(cells, csv);
  }
  return cells;
}

void write_sweep_csv(const std::vector<SweepCell>& cells, std::ostream& out) {
  out << "param,value,final_loss,sim_time_s,sync_count,diverged\n";
  for (const auto& cell : cells) {
    std::string param, value;
    for (std::size_t i = 0; i < cell.params.size(); ++i) {
      if (i) {
        param += ';';
        value += ';';
      }
      param += cell.params[i];
      value += value_label(cell.values[i]);
    }
    out << csv_field(param) << ',' << csv_field(value) << ',';
    if (cell.summary) {
      const auto& s = *cell.summary;
      out << (s.final_loss ? number(*s.final_loss) : std::string("nan")) << ','
          << number(s.total_sim_seconds) << ',' << s.sync_count << ','
          << (s.diverged ? "true" : "false") << '\n';
    } else {
      out << "nan,nan,0,error\n";
    }
  }
}

}  // namespace palsgd
