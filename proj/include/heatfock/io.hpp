#pragma once

// Experiment configs, tensor files and the CSV/JSON row format.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "heatfock/fock.hpp"
#include "heatfock/stochastic.hpp"
#include "heatfock/suite.hpp"

namespace heatfock {

struct ExperimentConfig {
  ConfigPtr group;
  double T = 1.0;
  MCParams mc;
  std::vector<std::string> polynomial_texts;
  std::vector<Polynomial> polynomials;
  std::vector<GroupElement> points;
  std::vector<int> ranks;   // defaults to 1..k
  std::vector<double> p;    // defaults to {2}
  double path_scale = 1.0;  // verify-all path multiplier
};

/// Parses and validates a config document. Errors are ConfigError with a
/// "config: " prefix; JSON syntax errors carry line and column.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// FNV-1a 64 of the canonical JSON form of the parsed config, as 16 hex
/// digits. Whitespace and number spelling in the source do not matter.
std::string config_hash(const ExperimentConfig& cfg);

/// {"k", "d", "maxrank", "entries": [{"rank", "word", "value": [re, im]}]}.
std::string tensor_to_json(const FockTensor& alpha);
FockTensor tensor_from_json(const std::string& text, const ConfigPtr& cfg);

/// {"config_hash", "tensors": [{"polynomial", "tensor"}]}.
std::string tensors_to_json(const std::vector<std::string>& labels,
                            const std::vector<FockTensor>& tensors, const std::string& hash);
/// polynomial,rank,word,re,im with word as space-separated 0-based letters.
void write_tensors_csv(std::ostream& out, const std::vector<std::string>& labels,
                       const std::vector<FockTensor>& tensors);

/// %.17g.
std::string format_number(double x);
/// Real part alone when the imaginary part is zero, else "re+imi".
std::string format_target(cplx z);

extern const char* const kCsvHeader;

void write_rows_csv(std::ostream& out, const std::vector<CheckRow>& rows,
                    const std::string& hash);
void write_rows_json(std::ostream& out, const std::vector<CheckRow>& rows,
                     const std::string& hash);

}  // namespace heatfock
