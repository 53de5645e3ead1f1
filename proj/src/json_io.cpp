#include "cadlag/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cadlag/csv.hpp"

namespace cadlag {
namespace {

using nlohmann::json;

double time_field(const json& j) {
  if (j.is_string()) return std::stod(j.get<std::string>());
  return j.get<double>();
}

json coeffs_out(const TruncatedTensor& u) {
  json arr = json::array();
  for (std::size_t i = 1; i < u.coeffs.size(); ++i) arr.push_back(u.coeffs[i]);
  return arr;
}

TruncatedTensor coeffs_in(const json& arr, int d, int level) {
  TruncatedTensor u(d, level);
  if (static_cast<std::int64_t>(arr.size()) != total_size(d, level) - 1)
    throw std::invalid_argument("coefficient array has wrong length");
  for (std::size_t i = 0; i < arr.size(); ++i) u.coeffs[i + 1] = arr[i].get<double>();
  return u;
}

} // namespace

std::string path_to_json(const GroupPath& x) {
  json j;
  j["d"] = x.d();
  j["level"] = x.level();
  if (x.time_extended()) j["time_extended"] = true;
  json pieces = json::array();
  for (auto& pc : x.pieces()) {
    json p;
    if (pc.kind == PathPiece::Kind::segment) {
      p["kind"] = "segment";
      p["t0"] = format_double(pc.t0);
      p["t1"] = format_double(pc.t1);
      p["log_increment"] = coeffs_out(pc.log_inc);
    } else {
      p["kind"] = "jump";
      p["t"] = format_double(pc.t0);
      p["log_jump"] = coeffs_out(pc.log_inc);
    }
    pieces.push_back(std::move(p));
  }
  j["pieces"] = std::move(pieces);
  return j.dump(2);
}

GroupPath path_from_json(const std::string& text) {
  json j = json::parse(text);
  const int d = j.at("d").get<int>();
  const int level = j.at("level").get<int>();
  const bool te = j.value("time_extended", false);
  std::vector<PathPiece> pieces;
  for (auto& p : j.at("pieces")) {
    std::string kind = p.at("kind").get<std::string>();
    if (kind == "segment") {
      pieces.push_back(PathPiece::segment(time_field(p.at("t0")), time_field(p.at("t1")),
                                          coeffs_in(p.at("log_increment"), d, level)));
    } else if (kind == "jump") {
      pieces.push_back(PathPiece::jump(time_field(p.at("t")), coeffs_in(p.at("log_jump"), d, level)));
    } else {
      throw std::invalid_argument("unknown piece kind: " + kind);
    }
  }
  return GroupPath(d, level, std::move(pieces), te);
}

GroupPath load_path(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("cannot open " + filename);
  std::stringstream ss;
  ss << in.rdbuf();
  return path_from_json(ss.str());
}

void save_path(const GroupPath& x, const std::string& filename) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot write " + filename);
  out << path_to_json(x) << "\n";
}

std::string tensor_to_json(const TruncatedTensor& u) {
  json j;
  j["d"] = u.d;
  j["level"] = u.level;
  j["coeffs"] = u.coeffs;
  return j.dump(2);
}

TruncatedTensor tensor_from_json(const std::string& text) {
  json j = json::parse(text);
  TruncatedTensor u(j.at("d").get<int>(), j.at("level").get<int>());
  auto& arr = j.at("coeffs");
  if (arr.size() != u.coeffs.size()) throw std::invalid_argument("coeffs length mismatch");
  for (std::size_t i = 0; i < u.coeffs.size(); ++i) u.coeffs[i] = arr[i].get<double>();
  return u;
}

Word parse_word(const std::string& text) {
  Word w;
  std::string digits;
  for (char c : text) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
    } else {
      if (!digits.empty()) {
        w.push_back(std::stoi(digits));
        digits.clear();
      }
    }
  }
  if (!digits.empty()) w.push_back(std::stoi(digits));
  return w;
}

std::string word_to_string(const Word& w) {
  std::string out = "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(w[i]);
  }
  out += ")";
  return out;
}

} // namespace cadlag
