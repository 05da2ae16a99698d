#include "hardyop/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

namespace hardyop {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& text, const char* what) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(std::string("empty ") + what);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v))
    throw ConfigError(std::string("malformed ") + what + " '" + text + "'");
  return v;
}

long parse_long(const std::string& text, const char* what) {
  const std::string t = trim(text);
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) throw ConfigError(std::string("malformed ") + what + " '" + text + "'");
  return v;
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

json complex_pair(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_pair(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument("expected [re, im]");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

std::size_t positive_size(const json& j, const char* key) {
  if (!j.is_number_integer() || j.get<long long>() <= 0)
    throw ConfigError(std::string("config: '") + key + "' must be a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

// Frobenius residual of the conjugation identity and the spectrum of K_0.
struct IdentityMeasure {
  double residual;
  std::vector<double> k0_singular_values;
};

IdentityMeasure measure_identity(long n, const CoeffVector& h, const PowerWeight& w, std::size_t N) {
  const SymbolSpec a = SymbolSpec::shifted_analytic(n, h);
  const OuterPair W = outer_pair(w, IndexWindow(0, 4 * static_cast<long>(N) - 1));
  const OperatorMatrix C = conjugated_toeplitz_matrix(a, W, N);
  const OperatorMatrix K = k0_matrix(n, h, W, N);
  const OperatorMatrix T = toeplitz_matrix(a, N);
  const double diff = (C - (T + K)).frobenius_norm();
  const double scale = T.frobenius_norm();
  return IdentityMeasure{scale > 0.0 ? diff / scale : diff, singular_values(K)};
}

// Residual below which "smaller at 2N" is decided by rounding alone.
constexpr double kRoundingFloor = 1e-13;

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("p must lie in (1, inf)");
  if ((grid && *grid == 0) || (section && *section == 0) || tail == 0 || packet == 0 || thetas == 0)
    throw ConfigError("integer parameters must be positive");
}

cplx parse_complex(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty number");
  if (t.back() != 'i') return parse_real(t, "number");
  const std::string body = t.substr(0, t.size() - 1);
  std::size_t split_at = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  const auto imag = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s, "imaginary part");
  };
  if (split_at == std::string::npos) return cplx(0.0, imag(body));
  return cplx(parse_real(body.substr(0, split_at), "real part"), imag(body.substr(split_at)));
}

double parse_angle(const std::string& text) {
  const std::string t = trim(text);
  const auto at = t.find("pi");
  if (at == std::string::npos) return parse_real(t, "angle");
  const std::string coef = t.substr(0, at);
  const std::string rest = t.substr(at + 2);
  double v = std::numbers::pi;
  if (!coef.empty() && coef != "+") v *= coef == "-" ? -1.0 : parse_real(coef, "angle");
  if (!rest.empty()) {
    if (rest[0] != '/') throw ConfigError("malformed angle '" + text + "'");
    v /= parse_real(rest.substr(1), "angle");
  }
  return v;
}

SymbolSpec parse_symbol(const std::string& text) {
  const std::string t = trim(text);
  const auto colon = t.find(':');
  if (colon == std::string::npos) throw ConfigError("symbol '" + text + "': expected 'laurent:...' or 'shifted:...'");
  const std::string kind = t.substr(0, colon);
  const std::string body = t.substr(colon + 1);

  if (kind == "laurent") {
    std::map<long, cplx> terms;
    for (const std::string& item : split(body, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("symbol term '" + item + "': expected INDEX=VALUE");
      const long idx = parse_long(item.substr(0, eq), "symbol index");
      if (!terms.emplace(idx, parse_complex(item.substr(eq + 1))).second)
        throw ConfigError("symbol: index " + std::to_string(idx) + " given twice");
    }
    if (terms.empty()) throw ConfigError("symbol: no terms");
    const long lo = terms.begin()->first;
    std::vector<cplx> c(static_cast<std::size_t>(terms.rbegin()->first - lo + 1));
    for (const auto& [k, v] : terms) c[static_cast<std::size_t>(k - lo)] = v;
    return SymbolSpec::laurent(CoeffVector(lo, std::move(c)));
  }
  if (kind == "shifted") {
    const auto colon2 = body.find(':');
    if (colon2 == std::string::npos) throw ConfigError("symbol '" + text + "': expected shifted:N:H0,H1,...");
    const long n = parse_long(body.substr(0, colon2), "shift");
    if (n < 1) throw ConfigError("symbol: shift must be >= 1");
    std::vector<cplx> h;
    for (const std::string& item : split(body.substr(colon2 + 1), ',')) h.push_back(parse_complex(item));
    if (h.empty()) throw ConfigError("symbol: empty analytic factor");
    return SymbolSpec::shifted_analytic(n, CoeffVector(0, std::move(h)));
  }
  throw ConfigError("symbol: unknown kind '" + kind + "'");
}

PowerWeight parse_weight(const std::string& text) {
  const std::string t = trim(text);
  if (t == "none" || t == "1") return PowerWeight();
  std::vector<WeightPoint> points;
  for (const std::string& item : split(t, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("weight term '" + item + "': expected ANGLE:EXPONENT");
    points.push_back(WeightPoint{parse_angle(item.substr(0, colon)), parse_real(item.substr(colon + 1), "exponent")});
  }
  try {
    return PowerWeight(std::move(points));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string format_weight(const PowerWeight& w) {
  if (w.empty()) return "none";
  std::string out;
  for (const WeightPoint& p : w.points()) {
    if (!out.empty()) out += ',';
    out += format_real(p.angle) + ":" + format_real(p.exponent);
  }
  return out;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  ExperimentConfig cfg;
  for (const auto& [key, v] : j.items()) {
    if (key == "symbol") {
      if (!v.is_string()) throw ConfigError("config: 'symbol' must be a string");
      cfg.symbol = parse_symbol(v.get<std::string>());
    } else if (key == "weights") {
      if (!v.is_array()) throw ConfigError("config: 'weights' must be an array");
      for (const json& w : v) cfg.weights.push_back(w.is_string() ? parse_weight(w.get<std::string>()) : power_weight_from_json(w));
    } else if (key == "p") {
      if (!v.is_number()) throw ConfigError("config: 'p' must be a number");
      cfg.p = v.get<double>();
    } else if (key == "grid") {
      cfg.grid = positive_size(v, "grid");
    } else if (key == "section") {
      cfg.section = positive_size(v, "section");
    } else if (key == "tail") {
      cfg.tail = positive_size(v, "tail");
    } else if (key == "packet") {
      cfg.packet = positive_size(v, "packet");
    } else if (key == "thetas") {
      cfg.thetas = positive_size(v, "thetas");
    } else if (key == "output") {
      if (!v.is_string()) throw ConfigError("config: 'output' must be a string");
      cfg.output = v.get<std::string>();
    } else if (key == "format") {
      const std::string f = v.is_string() ? v.get<std::string>() : "";
      if (f != "csv" && f != "json") throw ConfigError("config: 'format' must be \"csv\" or \"json\"");
      cfg.format = f == "csv" ? OutputFormat::csv : OutputFormat::json;
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Serialization

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const CoeffVector& c) {
  json coeffs = json::array();
  for (const cplx& z : c.coeffs()) coeffs.push_back(complex_pair(z));
  return json{{"lo", c.lo()}, {"coeffs", coeffs}};
}

CoeffVector coeff_vector_from_json(const json& j) {
  std::vector<cplx> c;
  for (const json& z : j.at("coeffs")) c.push_back(complex_from_pair(z));
  return CoeffVector(j.at("lo").get<long>(), std::move(c));
}

json to_json(const GridFunction& g) {
  json samples = json::array();
  for (const cplx& z : g.samples()) samples.push_back(complex_pair(z));
  return json{{"size", g.size()}, {"samples", samples}};
}

GridFunction grid_function_from_json(const json& j) {
  std::vector<cplx> s;
  for (const json& z : j.at("samples")) s.push_back(complex_from_pair(z));
  if (s.size() != j.at("size").get<std::size_t>()) throw std::invalid_argument("GridFunction: size mismatch");
  return GridFunction(std::move(s));
}

json to_json(const PowerWeight& w) {
  json points = json::array();
  for (const WeightPoint& p : w.points()) points.push_back(json{{"angle", p.angle}, {"exponent", p.exponent}});
  return json{{"points", points}};
}

PowerWeight power_weight_from_json(const json& j) {
  std::vector<WeightPoint> points;
  for (const json& p : j.at("points")) points.push_back(WeightPoint{p.at("angle").get<double>(), p.at("exponent").get<double>()});
  return PowerWeight(std::move(points));
}

json to_json(const OperatorMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.n(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.n(); ++j) row.push_back(complex_pair(m(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"n", m.n()}, {"entries", rows}};
}

OperatorMatrix operator_matrix_from_json(const json& j) {
  const auto n = j.at("n").get<std::size_t>();
  const json& rows = j.at("entries");
  if (rows.size() != n) throw std::invalid_argument("OperatorMatrix: expected " + std::to_string(n) + " rows");
  std::vector<cplx> entries;
  for (const json& row : rows) {
    if (row.size() != n) throw std::invalid_argument("OperatorMatrix: ragged row");
    for (const json& z : row) entries.push_back(complex_from_pair(z));
  }
  return OperatorMatrix(n, std::move(entries));
}

json to_json(const NormEstimate& e) {
  return json{{"lower", e.lower}, {"upper", e.upper}, {"N", e.N}, {"m", e.m}, {"L", e.L}, {"thetas", e.thetas}};
}

NormEstimate norm_estimate_from_json(const json& j) {
  return NormEstimate{j.at("lower").get<double>(), j.at("upper").get<double>(), j.at("N").get<std::size_t>(),
                      j.at("m").get<std::size_t>(),    j.at("L").get<std::size_t>(),     j.at("thetas").get<std::size_t>()};
}

void write_csv(std::ostream& os, const OperatorMatrix& m) {
  os << "i,j,re,im\n";
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j)
      os << i << ',' << j << ',' << format_real(m(i, j).real()) << ',' << format_real(m(i, j).imag()) << '\n';
}

// ---------------------------------------------------------------------------
// Commands

int cmd_ap_check(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  const std::size_t M = cfg.grid.value_or(512);
  if (!is_power_of_two(M) || M < 2) throw ConfigError("grid must be a power of two >= 2");

  json rows = json::array();
  if (cfg.format == OutputFormat::csv) out << "weight,p,in_ap,M,ap_M,ap_2M,growth,growth_below_25pct\n";
  for (const PowerWeight& w : cfg.weights) {
    const bool in_ap = khvedelidze_ap_check(w, cfg.p);
    const double v1 = ap_characteristic(w.sample(M), cfg.p, std::min<std::size_t>(M, 1024));
    const double v2 = ap_characteristic(w.sample(2 * M), cfg.p, std::min<std::size_t>(2 * M, 1024));
    const double growth = v2 / v1 - 1.0;
    if (cfg.format == OutputFormat::csv) {
      out << csv_field(format_weight(w)) << ',' << format_real(cfg.p) << ',' << (in_ap ? "true" : "false") << ','
          << M << ',' << format_real(v1) << ',' << format_real(v2) << ',' << format_real(growth) << ','
          << (growth < 0.25 ? "true" : "false") << '\n';
    } else {
      rows.push_back(json{{"weight", to_json(w)},
                          {"in_ap", in_ap},
                          {"ap_M", v1},
                          {"ap_2M", v2},
                          {"growth", growth},
                          {"growth_below_25pct", growth < 0.25}});
    }
  }
  if (cfg.format == OutputFormat::json) emit(out, json{{"p", cfg.p}, {"M", M}, {"rows", rows}});
  return kExitPass;
}

int cmd_verify_identity(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  if (!cfg.symbol) throw ConfigError("verify-identity needs a symbol");
  const std::size_t N = cfg.section.value_or(128);

  long n = 0;
  CoeffVector h;
  if (cfg.symbol->kind() == SymbolSpec::Kind::shifted_analytic) {
    n = cfg.symbol->shift();
    h = cfg.symbol->analytic_factor();
  } else {
    std::tie(n, h) = csa_decompose(*cfg.symbol);
  }

  const std::vector<PowerWeight> weights = cfg.weights.empty() ? std::vector<PowerWeight>{PowerWeight()} : cfg.weights;
  bool all_pass = true;
  json rows = json::array();
  if (cfg.format == OutputFormat::csv) out << "weight,n,N,residual_N,residual_2N,k0_rank,sigma_ratio,pass\n";
  for (const PowerWeight& w : weights) {
    const IdentityMeasure coarse = measure_identity(n, h, w, N);
    const IdentityMeasure fine = measure_identity(n, h, w, 2 * N);
    const std::vector<double>& s = coarse.k0_singular_values;
    std::size_t rank = 0;
    for (double v : s)
      if (s.front() > 0.0 && v > 1e-8 * s.front()) ++rank;
    const auto un = static_cast<std::size_t>(n);
    const double ratio = s.front() > 0.0 && un < s.size() ? s[un] / s.front() : 0.0;
    const bool decreasing = fine.residual < coarse.residual || fine.residual <= kRoundingFloor;
    const bool pass = coarse.residual <= 1e-6 && decreasing && rank <= un;
    all_pass = all_pass && pass;
    if (cfg.format == OutputFormat::csv) {
      out << csv_field(format_weight(w)) << ',' << n << ',' << N << ',' << format_real(coarse.residual) << ','
          << format_real(fine.residual) << ',' << rank << ',' << format_real(ratio) << ',' << (pass ? "true" : "false")
          << '\n';
    } else {
      rows.push_back(json{{"weight", to_json(w)},
                          {"residual_N", coarse.residual},
                          {"residual_2N", fine.residual},
                          {"k0_rank", rank},
                          {"sigma_ratio", ratio},
                          {"pass", pass}});
    }
  }
  if (cfg.format == OutputFormat::json)
    emit(out, json{{"n", n}, {"h", to_json(h)}, {"N", N}, {"rows", rows}, {"pass", all_pass}});
  return all_pass ? kExitPass : kExitFail;
}

int cmd_essnorm(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  if (!cfg.symbol) throw ConfigError("essnorm needs a symbol");
  if (cfg.p != 2.0) throw ConfigError("essnorm works on H^2 only (p = 2)");
  for (const PowerWeight& w : cfg.weights)
    if (!khvedelidze_ap_check(w, 2.0)) throw ConfigError("essnorm: weight " + format_weight(w) + " is not in A_2");
  const std::size_t M = cfg.grid.value_or(std::size_t{1} << 16);
  if (!is_power_of_two(M) || M < 2) throw ConfigError("grid must be a power of two >= 2");
  const BracketParams params{cfg.section.value_or(1024), cfg.tail, cfg.packet, cfg.thetas};
  const SymbolSpec& a = *cfg.symbol;
  const double sup = grid_sup(a.coefficients(), M);

  struct Row {
    std::string label;
    json weight;
    NormEstimate e;
  };
  std::vector<Row> rows;
  rows.push_back(Row{"none", nullptr, essential_bracket(a, nullptr, params)});
  for (const PowerWeight& w : cfg.weights) {
    const OuterPair W = outer_pair(w, IndexWindow(0, 2 * static_cast<long>(params.N) - 1));
    rows.push_back(Row{format_weight(w), to_json(w), essential_bracket(a, &W, params)});
  }

  const double base = rows.front().e.upper;
  const double scale = sup > 0.0 ? sup : 1.0;
  double max_dev = 0.0;
  json table = json::array();
  if (cfg.format == OutputFormat::csv)
    out << "weight,N,m,L,thetas,lower,upper,grid_sup,dev_from_sup,dev_from_unweighted\n";
  for (const Row& r : rows) {
    const double dev_sup = std::abs(r.e.upper - sup) / scale;
    const double dev_base = std::abs(r.e.upper - base) / scale;
    max_dev = std::max(max_dev, dev_base);
    if (cfg.format == OutputFormat::csv) {
      out << csv_field(r.label) << ',' << r.e.N << ',' << r.e.m << ',' << r.e.L << ',' << r.e.thetas << ','
          << format_real(r.e.lower) << ',' << format_real(r.e.upper) << ',' << format_real(sup) << ','
          << format_real(dev_sup) << ',' << format_real(dev_base) << '\n';
    } else {
      table.push_back(json{{"weight", r.weight},
                           {"estimate", to_json(r.e)},
                           {"grid_sup", sup},
                           {"dev_from_sup", dev_sup},
                           {"dev_from_unweighted", dev_base}});
    }
  }
  if (cfg.format == OutputFormat::csv) {
    out << "max_cross_weight_deviation,,,,,,,,," << format_real(max_dev) << '\n';
  } else {
    emit(out, json{{"symbol", to_json(a.coefficients())},
                   {"grid", M},
                   {"rows", table},
                   {"max_cross_weight_deviation", max_dev}});
  }
  return kExitPass;
}

void write_ap_check_csv(std::ostream& os, const std::vector<ApCheckRow>& rows) {
  os << "p,exponent,in_ap";
  if (!rows.empty()) {
    const auto& g = rows.front().grids;
    for (std::size_t M : g) os << ",ap_" << M;
    for (std::size_t k = 0; k + 1 < g.size(); ++k) os << ",growth_" << g[k] << '_' << g[k + 1];
  }
  os << ",agrees\n";
  for (const ApCheckRow& r : rows) {
    os << format_real(r.p) << ',' << format_real(r.exponent) << ',' << (r.closed_form ? "true" : "false");
    for (double v : r.values) os << ',' << format_real(v);
    for (double g : r.growth) os << ',' << format_real(g);
    os << ',' << (r.agrees ? "true" : "false") << '\n';
  }
}

void write_identity_csv(std::ostream& os, const std::vector<IdentityRow>& rows) {
  os << "n,exponent,N,residual,sigma_ratio,k0_rank\n";
  for (const IdentityRow& r : rows)
    os << r.n << ',' << format_real(r.exponent) << ',' << r.N << ',' << format_real(r.residual) << ','
       << format_real(r.sigma_ratio) << ',' << r.rank << '\n';
}

void write_essnorm_csv(std::ostream& os, const std::vector<EssnormRow>& rows) {
  os << "symbol,weight,N,lower,upper,grid_sup,deviation\n";
  for (const EssnormRow& r : rows)
    os << csv_field(r.symbol) << ',' << csv_field(r.weight) << ',' << r.N << ',' << format_real(r.lower) << ','
       << format_real(r.upper) << ',' << format_real(r.grid_sup) << ',' << format_real(r.deviation) << '\n';
}

void write_outer_csv(std::ostream& os, const std::vector<OuterRow>& rows) {
  os << "quantity,grid,computed_re,computed_im,expected_re,expected_im,error,tolerance\n";
  for (const OuterRow& r : rows)
    os << csv_field(r.quantity) << ',' << r.grid << ',' << format_real(r.computed.real()) << ','
       << format_real(r.computed.imag()) << ',' << format_real(r.expected.real()) << ','
       << format_real(r.expected.imag()) << ',' << format_real(r.error) << ',' << format_real(r.tolerance) << '\n';
}

int cmd_reproduce(const std::string& dir, std::ostream& log) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");

  const std::vector<std::string> names{"ap_check.csv", "identity.csv", "essnorm.csv", "outer_validation.csv"};
  std::vector<std::ofstream> files;
  for (const std::string& name : names) {
    files.emplace_back(fs::path(dir) / name);
    if (!files.back()) throw IoError("cannot write '" + (fs::path(dir) / name).string() + "'");
  }

  const AcceptanceReport report = run_acceptance();
  write_ap_check_csv(files[0], report.ap_check);
  write_identity_csv(files[1], report.identity);
  write_essnorm_csv(files[2], report.essnorm);
  write_outer_csv(files[3], report.outer);
  for (std::size_t k = 0; k < files.size(); ++k) {
    files[k].flush();
    if (!files[k]) throw IoError("write failed for '" + (fs::path(dir) / names[k]).string() + "'");
  }

  for (const CriterionResult& r : report.criteria) log << format_result(r) << '\n';
  return report.all_passed() ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// Command line

namespace {

struct Flags {
  std::string config;
  std::string symbol;
  std::vector<std::string> weights;
  std::optional<double> p;
  std::optional<long long> grid, N, m, L, thetas;
  std::string format;
  std::string out;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON configuration file");
  cmd->add_option("--symbol", f.symbol, "symbol, e.g. laurent:-1=1,2=0.5 or shifted:2:1,0.5i");
  cmd->add_option("--weight", f.weights, "power weight ANGLE:EXP[,ANGLE:EXP...] (repeatable)");
  cmd->add_option("--p", f.p, "Lebesgue exponent p > 1");
  cmd->add_option("--grid", f.grid, "grid size M (power of two)");
  cmd->add_option("--N", f.N, "section size N");
  cmd->add_option("--m", f.m, "number of leading columns removed");
  cmd->add_option("--L", f.L, "wave-packet length");
  cmd->add_option("--thetas", f.thetas, "number of wave-packet phases");
  cmd->add_option("--format", f.format, "csv or json");
  cmd->add_option("--out", f.out, "output file (default: standard output)");
}

std::size_t positive_flag(long long v, const char* name) {
  if (v <= 0) throw ConfigError(std::string("--") + name + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

ExperimentConfig resolve(const Flags& f) {
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  if (!f.symbol.empty()) cfg.symbol = parse_symbol(f.symbol);
  if (!f.weights.empty()) {
    cfg.weights.clear();
    for (const std::string& w : f.weights) cfg.weights.push_back(parse_weight(w));
  }
  if (f.p) cfg.p = *f.p;
  if (f.grid) cfg.grid = positive_flag(*f.grid, "grid");
  if (f.N) cfg.section = positive_flag(*f.N, "N");
  if (f.m) cfg.tail = positive_flag(*f.m, "m");
  if (f.L) cfg.packet = positive_flag(*f.L, "L");
  if (f.thetas) cfg.thetas = positive_flag(*f.thetas, "thetas");
  if (!f.format.empty()) {
    if (f.format != "csv" && f.format != "json") throw ConfigError("--format must be csv or json");
    cfg.format = f.format == "csv" ? OutputFormat::csv : OutputFormat::json;
  }
  if (!f.out.empty()) cfg.output = f.out;
  cfg.validate();
  return cfg;
}

int run_table_command(int (*cmd)(const ExperimentConfig&, std::ostream&), const ExperimentConfig& cfg) {
  if (cfg.output.empty()) {
    const int code = cmd(cfg, std::cout);
    std::cout.flush();
    return code;
  }
  // Compute first so a failed run leaves no partial file behind.
  std::ostringstream buffer;
  const int code = cmd(cfg, buffer);
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw IoError("cannot write '" + cfg.output + "'");
  file << buffer.str();
  file.flush();
  if (!file) throw IoError("write failed for '" + cfg.output + "'");
  return code;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Toeplitz operators on weighted Hardy spaces: A_p checks, the conjugation identity, essential norms"};
  app.require_subcommand(1);

  Flags ap_flags, id_flags, ess_flags;
  CLI::App* ap = app.add_subcommand("ap-check", "closed-form and grid-arc A_p test per weight");
  add_flags(ap, ap_flags);
  CLI::App* id = app.add_subcommand("verify-identity", "residual of the conjugation identity and rank of K_0");
  add_flags(id, id_flags);
  CLI::App* ess = app.add_subcommand("essnorm", "essential-norm brackets per weight");
  add_flags(ess, ess_flags);
  std::string repro_dir;
  CLI::App* repro = app.add_subcommand("reproduce", "run the acceptance suite and write its tables");
  repro->add_option("dir,--out", repro_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "hardyop: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (ap->parsed()) return run_table_command(cmd_ap_check, resolve(ap_flags));
    if (id->parsed()) return run_table_command(cmd_verify_identity, resolve(id_flags));
    if (ess->parsed()) return run_table_command(cmd_essnorm, resolve(ess_flags));
    if (repro->parsed()) return cmd_reproduce(repro_dir, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "hardyop: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "hardyop: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hardyop: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "hardyop: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitConfig;
}

}  // namespace hardyop
