#include "mccm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mccm/errors.hpp"

namespace mccm {
namespace {

using nlohmann::json;

std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  return buf.str();
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

Eigen::VectorXd vector_from_json(const json& arr, Eigen::Index expected,
                                 const std::string& what) {
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != expected)
    throw IoError(what + " must be an array of " + std::to_string(expected) + " numbers");
  Eigen::VectorXd v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) {
    const json& cell = arr[static_cast<std::size_t>(i)];
    if (!cell.is_number()) throw IoError(what + " contains a non-numeric entry");
    v[i] = cell.get<double>();
  }
  return v;
}

void renormalize_in_place(Eigen::VectorXd& v) {
  double sum = v.sum();
  if (std::abs(sum) > kStructuralZeroTol) v /= sum;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string model_to_json(const ModelParams& model) {
  std::ostringstream os;
  os << "{\"n\":" << model.n << ",\"lambda\":[";
  for (Eigen::Index j = 0; j < model.lambda.size(); ++j) {
    if (j) os << ',';
    os << format_double(model.lambda[j]);
  }
  os << "],\"rho\":[";
  for (Eigen::Index i = 0; i < model.rho.rows(); ++i) {
    if (i) os << ',';
    os << '[';
    for (Eigen::Index j = 0; j < model.rho.cols(); ++j) {
      if (j) os << ',';
      os << format_double(model.rho(i, j));
    }
    os << ']';
  }
  os << "]}";
  return os.str();
}

ModelParams model_from_json(const std::string& text, bool renormalize) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("model JSON: ") + e.what());
  }
  if (!doc.is_object()) throw IoError("model JSON: top level must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw IoError("model JSON: \"n\" must be an integer");
  ModelParams model;
  model.n = doc["n"].get<int>();
  if (model.n < 1) throw IoError("model JSON: \"n\" must be at least 1");
  const Eigen::Index dim = model.n + 1;
  if (!doc.contains("lambda")) throw IoError("model JSON: missing \"lambda\"");
  model.lambda = vector_from_json(doc["lambda"], dim, "\"lambda\"");
  if (!doc.contains("rho") || !doc["rho"].is_array() ||
      static_cast<Eigen::Index>(doc["rho"].size()) != dim)
    throw IoError("model JSON: \"rho\" must be an array of " + std::to_string(dim) + " rows");
  model.rho.resize(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::VectorXd row = vector_from_json(doc["rho"][static_cast<std::size_t>(i)], dim,
                                           "\"rho\" row " + std::to_string(i));
    model.rho.row(i) = row;
  }
  if (renormalize) {
    renormalize_in_place(model.lambda);
    for (Eigen::Index i = 0; i < dim; ++i) {
      Eigen::VectorXd row = model.rho.row(i);
      renormalize_in_place(row);
      model.rho.row(i) = row;
    }
  }
  return model;
}

void save_model(const std::filesystem::path& path, const ModelParams& model) {
  std::ofstream out = open_for_write(path);
  out << model_to_json(model) << '\n';
  if (!out) throw IoError("error while writing " + path.string());
}

ModelParams load_model(const std::filesystem::path& path, bool renormalize) {
  return model_from_json(read_file(path), renormalize);
}

void save_choice_table(const std::filesystem::path& path, const ChoiceTable& table) {
  std::ofstream out = open_for_write(path);
  for (const auto& [s, probs] : table.entries()) {
    out << "{\"S\":[";
    const std::vector<int>& products = s.products();
    for (std::size_t i = 0; i < products.size(); ++i) {
      if (i) out << ',';
      out << products[i];
    }
    out << "],\"pi\":{";
    const std::vector<int> outcomes = s.outcomes();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      if (i) out << ',';
      out << '"' << outcomes[i] << "\":"
          << format_double(probs[static_cast<Eigen::Index>(i)]);
    }
    out << "}}\n";
  }
  if (!out) throw IoError("error while writing " + path.string());
}

ChoiceTable load_choice_table(const std::filesystem::path& path, int n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  ChoiceTable table(n);
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception& e) {
      throw IoError(where + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("S") || !doc.contains("pi"))
      throw IoError(where + ": each record needs \"S\" and \"pi\"");
    const json& s_arr = doc["S"];
    if (!s_arr.is_array() || s_arr.empty())
      throw IoError(where + ": \"S\" must be a nonempty array of product ids");
    std::vector<int> products;
    products.reserve(s_arr.size());
    for (const json& cell : s_arr) {
      if (!cell.is_number_integer()) throw IoError(where + ": \"S\" entries must be integers");
      products.push_back(cell.get<int>());
    }
    try {
      Assortment s(products);
      if (s.max_product() > n)
        throw IoError(where + ": product " + std::to_string(s.max_product()) +
                      " is out of range for n=" + std::to_string(n));
      if (table.contains(s)) throw IoError(where + ": duplicate assortment " + s.str());
      const json& pi = doc["pi"];
      if (!pi.is_object()) throw IoError(where + ": \"pi\" must be an object");
      const std::vector<int> outcomes = s.outcomes();
      if (pi.size() != outcomes.size())
        throw IoError(where + ": \"pi\" must have exactly " +
                      std::to_string(outcomes.size()) + " entries (0 and each product)");
      Eigen::VectorXd probs(static_cast<Eigen::Index>(outcomes.size()));
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const std::string key = std::to_string(outcomes[i]);
        if (!pi.contains(key)) throw IoError(where + ": \"pi\" is missing outcome " + key);
        if (!pi[key].is_number()) throw IoError(where + ": \"pi\" values must be numbers");
        probs[static_cast<Eigen::Index>(i)] = pi[key].get<double>();
      }
      table.set(s, probs);
    } catch (const IoError&) {
      throw;
    } catch (const DomainError& e) {
      throw DomainError(where + ": " + e.what());
    }
  }
  if (in.bad()) throw IoError("error while reading " + path.string());
  return table;
}

std::string report_to_json(const RecoveryReport& report) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"recovered\": " << model_to_json(report.recovered) << ",\n";

  os << "  \"per_system_residual\": {";
  bool first = true;
  for (const auto& [key, value] : report.per_system_residual) {
    os << (first ? "" : ", ") << '"' << escape_json(key) << "\": " << format_double(value);
    first = false;
  }
  os << "},\n";

  os << "  \"per_system_rank\": {";
  first = true;
  for (const auto& [key, value] : report.per_system_rank) {
    os << (first ? "" : ", ") << '"' << escape_json(key) << "\": " << value;
    first = false;
  }
  os << "},\n";

  os << "  \"rank_threshold\": " << format_double(report.rank_threshold) << ",\n";

  os << "  \"max_param_error\": ";
  if (report.max_param_error)
    os << format_double(*report.max_param_error);
  else
    os << "null";
  os << ",\n";

  os << "  \"projected\": [";
  first = true;
  for (const std::string& name : report.projected) {
    os << (first ? "" : ", ") << '"' << escape_json(name) << '"';
    first = false;
  }
  os << "],\n";

  os << "  \"per_system_errors\": {";
  first = true;
  for (const auto& [key, value] : report.per_system_errors) {
    os << (first ? "" : ", ") << '"' << escape_json(key) << "\": \"" << escape_json(value)
       << '"';
    first = false;
  }
  os << "},\n";

  os << "  \"validation\": [";
  first = true;
  for (const Violation& v : report.validation) {
    os << (first ? "" : ", ") << "{\"code\": \"" << to_string(v.code) << "\", \"detail\": \""
       << escape_json(v.detail) << "\"}";
    first = false;
  }
  os << "]\n}\n";
  return os.str();
}

void save_report(const std::filesystem::path& path, const RecoveryReport& report) {
  std::ofstream out = open_for_write(path);
  out << report_to_json(report);
  if (!out) throw IoError("error while writing " + path.string());
}

std::string model_hash_hex(const ModelParams& model) {
  const std::string enc = model_to_json(model);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : enc) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mccm
