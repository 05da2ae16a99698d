#pragma once

// Command-line front end: configuration parsing, JSON/CSV serialization of
// the library types, and the four subcommands.
//
//   hardyop ap-check         per weight: closed-form verdict, grid-arc A_p
//                            values at M and 2M, growth
//   hardyop verify-identity  per weight: residual of the conjugation identity
//                            at N and 2N, rank of K_0
//   hardyop essnorm          per weight: essential-norm bracket against
//                            grid-sup|a|
//   hardyop reproduce        runs the acceptance suite, writes four CSV tables
//
// Exit codes: 0 pass, 1 verification failure, 2 configuration error,
// 3 I/O error.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardyop/acceptance.hpp"
#include "hardyop/estimation.hpp"
#include "hardyop/operators.hpp"
#include "hardyop/spectral.hpp"
#include "hardyop/weights.hpp"

namespace hardyop {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitConfig = 2, kExitIo = 3 };

/// Malformed configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failed read or write; maps to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct ExperimentConfig {
  std::optional<SymbolSpec> symbol;
  std::vector<PowerWeight> weights;
  double p = 2.0;
  std::optional<std::size_t> grid;     ///< M; command-specific default
  std::optional<std::size_t> section;  ///< N; command-specific default
  std::size_t tail = 64;               ///< m
  std::size_t packet = 64;             ///< L
  std::size_t thetas = 256;
  std::string output;                  ///< empty: standard output
  OutputFormat format = OutputFormat::csv;

  /// Throws ConfigError unless all integers are positive and p > 1.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Text forms
//
// symbol: "laurent:IDX=VAL,IDX=VAL,..."  e.g. "laurent:-1=1,2=0.5"
//         "shifted:N:H0,H1,..."          e_{-N} (H0 + H1 z + ...)
// VAL is a real or complex number: "0.5", "-2i", "1+0.5i", "1e-3-2i".
// weight: "ANGLE:EXP,ANGLE:EXP,..." with ANGLE in radians; "pi", "pi/2" and
//         "3pi/2" style multiples are accepted.

cplx parse_complex(const std::string& text);
double parse_angle(const std::string& text);
SymbolSpec parse_symbol(const std::string& text);
PowerWeight parse_weight(const std::string& text);
std::string format_weight(const PowerWeight& w);

/// Reads a JSON configuration. Keys: symbol, weights, p, grid, section, tail,
/// packet, thetas, output, format. Weights are either weight strings or
/// PowerWeight objects.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Serialization

/// "%.17g"
std::string format_real(double v);

nlohmann::json to_json(const CoeffVector& c);
CoeffVector coeff_vector_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GridFunction& g);
GridFunction grid_function_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PowerWeight& w);
PowerWeight power_weight_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OperatorMatrix& m);
OperatorMatrix operator_matrix_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NormEstimate& e);
NormEstimate norm_estimate_from_json(const nlohmann::json& j);

/// Header "i,j,re,im", one row per entry in row-major order.
void write_csv(std::ostream& os, const OperatorMatrix& m);

// ---------------------------------------------------------------------------
// Commands. Each writes its table to `out` and returns an exit code.

int cmd_ap_check(const ExperimentConfig& cfg, std::ostream& out);
int cmd_verify_identity(const ExperimentConfig& cfg, std::ostream& out);
int cmd_essnorm(const ExperimentConfig& cfg, std::ostream& out);

/// Writes ap_check.csv, identity.csv, essnorm.csv and outer_validation.csv
/// into `dir` (created if missing) and one PASS/FAIL line per criterion to
/// `log`. Throws IoError when the directory or a file cannot be written.
int cmd_reproduce(const std::string& dir, std::ostream& log);

/// Table writers used by cmd_reproduce.
void write_ap_check_csv(std::ostream& os, const std::vector<ApCheckRow>& rows);
void write_identity_csv(std::ostream& os, const std::vector<IdentityRow>& rows);
void write_essnorm_csv(std::ostream& os, const std::vector<EssnormRow>& rows);
void write_outer_csv(std::ostream& os, const std::vector<OuterRow>& rows);

/// Full command line; never throws.
int run_cli(int argc, char** argv);

}  // namespace hardyop
