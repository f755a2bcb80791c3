#include "cli_support.hpp"

#include <cmath>
#include <optional>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hermite_obs::cli {

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::string scalar_text(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) {
      if (e.is_array() || e.is_object()) throw ConfigError("field '" + key + "': nested arrays are not allowed");
      if (!out.empty()) out += ",";
      out += scalar_text(key, e);
    }
    return out;
  }
  throw ConfigError("field '" + key + "': expected a string, number, boolean or list");
}

}  // namespace

MergedArgs merge_config(const std::vector<std::string>& argv) {
  MergedArgs out;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    const auto& a = argv[i];
    if (a == "--config") {
      if (i + 1 >= argv.size()) throw ConfigError("--config needs a file path");
      out.config_path = argv[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      out.config_path = a.substr(9);
    } else {
      rest.push_back(a);
    }
  }
  out.args = rest;
  if (out.config_path.empty()) return out;

  const std::string text = read_text(out.config_path);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return out;
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed config '" + out.config_path + "' at " + line_col(text, e.byte) + ": " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config '" + out.config_path + "' must hold a JSON object");

  auto given = [&](const std::string& flag) -> std::optional<std::string> {
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (rest[i] == flag) return i + 1 < rest.size() ? rest[i + 1] : std::string("true");
      if (rest[i].rfind(flag + "=", 0) == 0) return rest[i].substr(flag.size() + 1);
    }
    return std::nullopt;
  };
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (given(flag)) continue;
      if (value.get<bool>()) out.args.push_back(flag);
      continue;
    }
    const std::string text_value = scalar_text(key, value);
    if (auto cli = given(flag)) {
      if (*cli != text_value)
        out.warnings.push_back("config sets " + key + "=" + text_value + ", command line value " + *cli + " wins");
      continue;
    }
    out.args.push_back(flag);
    out.args.push_back(text_value);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  auto to_int = [&](const std::string& t) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size()) throw ConfigError("'" + s + "' is not an integer list");
    return v;
  };
  std::vector<int> out;
  if (auto c1 = s.find(':'); c1 != std::string::npos) {
    auto c2 = s.find(':', c1 + 1);
    const int lo = to_int(s.substr(0, c1));
    const int hi = to_int(c2 == std::string::npos ? s.substr(c1 + 1) : s.substr(c1 + 1, c2 - c1 - 1));
    const int step = c2 == std::string::npos ? 1 : to_int(s.substr(c2 + 1));
    if (step <= 0) throw ConfigError("range step must be positive in '" + s + "'");
    for (int v = lo; v <= hi; v += step) out.push_back(v);
    return out;
  }
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(to_int(tok));
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw ConfigError("'" + s + "' is not a list of numbers");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string CsvTable::render() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  char buf[64];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      if (const double* d = std::get_if<double>(&row[i])) {
        std::snprintf(buf, sizeof buf, "%.17g", *d);
        out += buf;
      } else if (const long long* l = std::get_if<long long>(&row[i])) {
        out += std::to_string(*l);
      } else {
        out += std::get<std::string>(row[i]);
      }
    }
    out += "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& content, bool mkdirs) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.has_parent_path() && !fs::exists(p.parent_path())) {
    if (!mkdirs) throw IoError("directory '" + p.parent_path().string() + "' does not exist (use --mkdirs)");
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create '" + p.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace hermite_obs::cli
