#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace afsim {

class AnovaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FactorSchema {
  std::string name;
  std::vector<std::string> levels;
};

// One scalar response per factor-level combination.
class ResponseTable {
 public:
  struct Row {
    std::vector<std::size_t> levels;
    double value;
  };

  ResponseTable(std::vector<FactorSchema> factors, std::string response);

  void add(std::vector<std::size_t> levels, double value);

  const std::vector<FactorSchema>& factors() const { return factors_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::string& response() const { return response_; }
  std::size_t size() const { return rows_.size(); }

  std::size_t factor_index(const std::string& name) const;
  std::size_t level_index(std::size_t factor, const std::string& level) const;

  // Every combination present exactly once.
  bool balanced() const;

 private:
  std::vector<FactorSchema> factors_;
  std::string response_;
  std::vector<Row> rows_;
};

double overall_mean(const ResponseTable& table);

// Mean over rows with factor == level, minus the overall mean.
double main_effect(const ResponseTable& table, std::size_t factor, std::size_t level);

// Mean over rows with A == a and B == b, minus overall mean and both main effects.
double interaction(const ResponseTable& table, std::size_t factor_a, std::size_t level_a, std::size_t factor_b,
                   std::size_t level_b);

// sum(result^2) - N * mean^2, with compensated summation.
double total_variation(const ResponseTable& table);

struct Allocation {
  std::string name;                  // "A" or "A x B"
  std::vector<std::size_t> factors;  // one index for a main effect, two for an interaction
  double variation = 0.0;
  double percent = 0.0;
};

struct InteractionTable {
  std::size_t factor_a = 0;
  std::size_t factor_b = 0;
  std::vector<std::vector<double>> effects;  // [level_a][level_b]
};

struct AnovaReport {
  std::string response;
  std::vector<FactorSchema> factors;
  std::size_t runs = 0;
  double overall_mean = 0.0;
  std::vector<std::vector<double>> main_effects;  // [factor][level]
  std::vector<InteractionTable> interactions;
  double total_variation = 0.0;
  // Main effects first, then pairs, in factor order.
  std::vector<Allocation> allocation;
  double residual_variation = 0.0;
  double residual_percent = 0.0;

  const Allocation& find(const std::string& name) const;
  // Allocations ordered by descending share.
  std::vector<Allocation> ranked() const;

  std::string to_text() const;
  std::string to_csv() const;
};

// Requires a balanced table. A table without variation reports every
// allocation as 0% and the whole 100% as residual.
AnovaReport allocate_variation(const ResponseTable& table);

}  // namespace afsim
