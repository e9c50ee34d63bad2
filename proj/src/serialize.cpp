#include "toral/serialize.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "toral/errors.hpp"

namespace toral {

json to_json(const Int& v) {
  if (fits_i64(v)) return to_i64(v);
  return to_string(v);
}

json to_json(const Rat& v) { return json{{"num", to_json(Int(v.get_num()))}, {"den", to_json(Int(v.get_den()))}}; }

json to_json(const IntPoly& f) {
  json a = json::array();
  for (const auto& c : f.coeffs()) a.push_back(to_json(c));
  return a;
}

json to_json(const IntMatrix& A) {
  json rows = json::array();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < A.cols(); ++j) row.push_back(to_json(A(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const SplitPrimeCert& c) {
  return json{{"p", c.p}, {"roots", c.roots}, {"disc", to_json(c.disc)}, {"f0", to_json(c.f0)}};
}

json to_json(const LrsProfile& p) {
  return json{{"p", p.p}, {"T1", to_json(p.T1)}, {"t", p.t}, {"k", p.k}, {"Tk", to_json(p.Tk)}};
}

json to_json(const OrbitRecord& r, bool with_points) {
  json j;
  j["base"] = json{{"u", r.base.u}, {"m", r.base.m}};
  j["T"] = to_json(r.T);
  j["d_sq"] = r.d_sq ? to_json(*r.d_sq) : json(nullptr);
  j["d_exact"] = r.d_exact;
  if (r.d_sq_lower) j["d_sq_lower"] = to_json(*r.d_sq_lower);
  if (auto m = r.metric_exact())
    j["metric"] = to_json(*m);
  else
    j["metric"] = nullptr;
  if (auto m = r.metric_float())
    j["metric_float"] = *m;
  else
    j["metric_float"] = nullptr;
  j["construction"] = to_string(r.construction);
  j["level"] = r.level;
  json pd = json::array();
  for (const auto& p : r.prime_data)
    pd.push_back(json{{"p", p.p}, {"k", p.k}, {"root", to_json(p.root)}, {"block", p.block}});
  j["prime_data"] = pd;
  if (with_points && r.materialized()) {
    json pts = json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i) {
      auto s = r.points[i];
      pts.push_back(std::vector<std::int64_t>(s.begin(), s.end()));
    }
    j["points"] = pts;
  }
  return j;
}

json to_json(const BoxMeasureReport& r) {
  return json{{"level", r.level}, {"grid", r.grid}, {"T", to_json(r.T)}, {"max_dev", r.max_dev}, {"counts", r.counts}};
}

json to_json(const DistanceCertificate& c) {
  return json{{"pairs_checked", c.pairs_checked},
              {"min_abs_wedge", to_json(c.min_abs_wedge)},
              {"frob_product", to_json(c.frob_product)},
              {"bound_holds", c.bound_holds}};
}

std::string csv_header() { return "k,p_config,T,d2,dnT"; }

std::string prime_config(const OrbitRecord& r) {
  std::string s;
  for (const auto& p : r.prime_data) {
    if (!s.empty()) s += '*';
    s += std::to_string(p.p) + '^' + std::to_string(p.k);
  }
  return s;
}

std::string csv_row(const OrbitRecord& r) {
  std::ostringstream os;
  os << r.level << ',' << prime_config(r) << ',' << to_string(r.T) << ',';
  os << (r.d_sq ? to_string(*r.d_sq) : std::string("none")) << ',';
  if (auto m = r.metric_exact())
    os << to_string(*m);
  else if (auto f = r.metric_float())
    os << std::setprecision(12) << *f;
  else
    os << "none";
  return os.str();
}

namespace {

Int parse_int(const std::string& s) {
  Int v;
  if (s.empty() || v.set_str(s, 10) != 0) throw InputError("not an integer: '" + s + "'");
  return v;
}

Int json_int(const json& j) {
  if (j.is_number_integer()) return Int(j.dump());
  if (j.is_string()) return parse_int(j.get<std::string>());
  throw InputError("matrix entries must be integers");
}

IntMatrix finish(const std::vector<std::vector<Int>>& rows) {
  if (rows.empty()) throw InputError("matrix is empty");
  for (const auto& r : rows)
    if (r.size() != rows.size()) throw InputError("matrix must be square");
  return IntMatrix::from_rows(rows);
}

}  // namespace

IntMatrix parse_matrix(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InputError("matrix is empty");
  std::vector<std::vector<Int>> rows;
  if (text[first] == '[') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError(std::string("matrix JSON parse error: ") + e.what());
    }
    if (!j.is_array()) throw InputError("matrix JSON must be an array of rows");
    for (const auto& r : j) {
      if (!r.is_array()) throw InputError("matrix JSON must be an array of rows");
      std::vector<Int> row;
      for (const auto& x : r) row.push_back(json_int(x));
      rows.push_back(std::move(row));
    }
    return finish(rows);
  }
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<Int> row;
    std::string tok;
    while (ls >> tok) row.push_back(parse_int(tok));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return finish(rows);
}

IntMatrix load_matrix(const std::string& source) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(source, ec)) {
    std::ifstream f(source);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_matrix(ss.str());
  }
  return parse_matrix(source);
}

TorusPoint parse_point(const std::string& text) {
  std::vector<Rat> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw InputError("empty point coordinate");
    item = item.substr(b, e - b + 1);
    const auto slash = item.find('/');
    Int num = parse_int(item.substr(0, slash));
    Int den = slash == std::string::npos ? Int(1) : parse_int(item.substr(slash + 1));
    if (den <= 0) throw InputError("point denominators must be positive");
    coords.push_back(make_rat(num, den));
  }
  if (coords.empty()) throw InputError("empty point");
  return torus_point(coords);
}

}  // namespace toral
