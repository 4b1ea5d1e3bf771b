#include "afsim/anova.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace afsim {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void require_rows(const ResponseTable& t) {
  if (t.size() == 0) throw AnovaError("response table '" + t.response() + "' is empty");
}

void require_level(const ResponseTable& t, std::size_t factor, std::size_t level) {
  if (factor >= t.factors().size()) throw AnovaError("unknown factor index " + std::to_string(factor));
  if (level >= t.factors()[factor].levels.size()) {
    throw AnovaError("unknown level " + std::to_string(level) + " for factor '" + t.factors()[factor].name + "'");
  }
}

// Means per level of each factor and per level pair of each factor pair,
// gathered in one pass.
struct CellMeans {
  std::vector<std::vector<double>> level;  // [f][l]
  std::vector<std::vector<double>> pair;  // [pair][la * nb + lb]
  std::vector<std::pair<std::size_t, std::size_t>> pair_index;
};

CellMeans cell_means(const ResponseTable& t) {
  const auto& fs = t.factors();
  CellMeans m;
  std::vector<std::vector<CompensatedSum>> lsum(fs.size());
  std::vector<std::vector<std::size_t>> lcount(fs.size());
  for (std::size_t f = 0; f < fs.size(); ++f) {
    lsum[f].resize(fs[f].levels.size());
    lcount[f].resize(fs[f].levels.size());
  }
  std::vector<std::vector<CompensatedSum>> psum;
  std::vector<std::vector<std::size_t>> pcount;
  for (std::size_t a = 0; a < fs.size(); ++a) {
    for (std::size_t b = a + 1; b < fs.size(); ++b) {
      m.pair_index.emplace_back(a, b);
      psum.emplace_back(fs[a].levels.size() * fs[b].levels.size());
      pcount.emplace_back(fs[a].levels.size() * fs[b].levels.size());
    }
  }
  for (const auto& row : t.rows()) {
    for (std::size_t f = 0; f < fs.size(); ++f) {
      lsum[f][row.levels[f]].add(row.value);
      ++lcount[f][row.levels[f]];
    }
    for (std::size_t p = 0; p < m.pair_index.size(); ++p) {
      const auto [a, b] = m.pair_index[p];
      const std::size_t cell = row.levels[a] * fs[b].levels.size() + row.levels[b];
      psum[p][cell].add(row.value);
      ++pcount[p][cell];
    }
  }
  auto mean = [](const CompensatedSum& s, std::size_t n) {
    return n == 0 ? std::nan("") : s.value() / static_cast<double>(n);
  };
  m.level.resize(fs.size());
  for (std::size_t f = 0; f < fs.size(); ++f) {
    for (std::size_t l = 0; l < fs[f].levels.size(); ++l) m.level[f].push_back(mean(lsum[f][l], lcount[f][l]));
  }
  m.pair.resize(m.pair_index.size());
  for (std::size_t p = 0; p < m.pair_index.size(); ++p) {
    for (std::size_t c = 0; c < psum[p].size(); ++c) m.pair[p].push_back(mean(psum[p][c], pcount[p][c]));
  }
  return m;
}

double mean_where(const ResponseTable& t, std::size_t fa, std::size_t la, std::size_t fb, std::size_t lb, bool pair) {
  CompensatedSum s;
  std::size_t n = 0;
  for (const auto& row : t.rows()) {
    if (row.levels[fa] != la) continue;
    if (pair && row.levels[fb] != lb) continue;
    s.add(row.value);
    ++n;
  }
  if (n == 0) throw AnovaError("no rows for the requested level combination");
  return s.value() / static_cast<double>(n);
}

}  // namespace

ResponseTable::ResponseTable(std::vector<FactorSchema> factors, std::string response)
    : factors_(std::move(factors)), response_(std::move(response)) {
  if (factors_.empty()) throw AnovaError("response table needs at least one factor");
  for (const auto& f : factors_) {
    if (f.levels.empty()) throw AnovaError("factor '" + f.name + "' has no levels");
  }
}

void ResponseTable::add(std::vector<std::size_t> levels, double value) {
  if (levels.size() != factors_.size()) throw AnovaError("row has the wrong number of factor levels");
  for (std::size_t f = 0; f < levels.size(); ++f) {
    if (levels[f] >= factors_[f].levels.size()) {
      throw AnovaError("level index out of range for factor '" + factors_[f].name + "'");
    }
  }
  if (!std::isfinite(value)) throw AnovaError("response values must be finite");
  rows_.push_back({std::move(levels), value});
}

std::size_t ResponseTable::factor_index(const std::string& name) const {
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    if (factors_[f].name == name) return f;
  }
  throw AnovaError("unknown factor '" + name + "'");
}

std::size_t ResponseTable::level_index(std::size_t factor, const std::string& level) const {
  if (factor >= factors_.size()) throw AnovaError("unknown factor index");
  const auto& lv = factors_[factor].levels;
  auto it = std::find(lv.begin(), lv.end(), level);
  if (it == lv.end()) throw AnovaError("unknown level '" + level + "' for factor '" + factors_[factor].name + "'");
  return static_cast<std::size_t>(it - lv.begin());
}

bool ResponseTable::balanced() const {
  std::size_t cells = 1;
  for (const auto& f : factors_) cells *= f.levels.size();
  if (rows_.size() != cells) return false;
  std::vector<bool> seen(cells, false);
  for (const auto& row : rows_) {
    std::size_t code = 0;
    for (std::size_t f = 0; f < factors_.size(); ++f) code = code * factors_[f].levels.size() + row.levels[f];
    if (seen[code]) return false;
    seen[code] = true;
  }
  return true;
}

double overall_mean(const ResponseTable& table) {
  require_rows(table);
  CompensatedSum s;
  for (const auto& row : table.rows()) s.add(row.value);
  return s.value() / static_cast<double>(table.size());
}

double main_effect(const ResponseTable& table, std::size_t factor, std::size_t level) {
  require_rows(table);
  require_level(table, factor, level);
  return mean_where(table, factor, level, 0, 0, false) - overall_mean(table);
}

double interaction(const ResponseTable& table, std::size_t factor_a, std::size_t level_a, std::size_t factor_b,
                   std::size_t level_b) {
  require_rows(table);
  if (factor_a == factor_b) throw AnovaError("interaction needs two distinct factors");
  require_level(table, factor_a, level_a);
  require_level(table, factor_b, level_b);
  const double mean = overall_mean(table);
  return mean_where(table, factor_a, level_a, factor_b, level_b, true) -
         (mean + main_effect(table, factor_a, level_a) + main_effect(table, factor_b, level_b));
}

double total_variation(const ResponseTable& table) {
  require_rows(table);
  CompensatedSum sq;
  for (const auto& row : table.rows()) sq.add(row.value * row.value);
  const double mean = overall_mean(table);
  return sq.value() - static_cast<double>(table.size()) * mean * mean;
}

AnovaReport allocate_variation(const ResponseTable& table) {
  require_rows(table);
  if (!table.balanced()) {
    throw AnovaError("response table '" + table.response() +
                     "' is not a balanced full factorial (every level combination exactly once)");
  }
  const auto& fs = table.factors();
  const double n = static_cast<double>(table.size());
  AnovaReport rep;
  rep.response = table.response();
  rep.factors = fs;
  rep.runs = table.size();
  rep.overall_mean = overall_mean(table);

  CompensatedSum sq;
  CompensatedSum dev;
  for (const auto& row : table.rows()) {
    sq.add(row.value * row.value);
    const double d = row.value - rep.overall_mean;
    dev.add(d * d);
  }
  rep.total_variation = sq.value() - n * rep.overall_mean * rep.overall_mean;
  // Cancellation can leave a tiny non-zero (or negative) remainder for a
  // constant table; the deviation sum decides whether there is variation.
  const bool degenerate = dev.value() <= 1e-12 * std::max(sq.value(), 1e-300);
  if (degenerate) rep.total_variation = 0.0;

  const CellMeans m = cell_means(table);
  rep.main_effects.resize(fs.size());
  for (std::size_t f = 0; f < fs.size(); ++f) {
    CompensatedSum ss;
    for (double level_mean : m.level[f]) {
      const double e = level_mean - rep.overall_mean;
      rep.main_effects[f].push_back(e);
      ss.add(e * e);
    }
    const double per_level = n / static_cast<double>(fs[f].levels.size());
    rep.allocation.push_back({fs[f].name, {f}, per_level * ss.value(), 0.0});
  }
  for (std::size_t p = 0; p < m.pair_index.size(); ++p) {
    const auto [a, b] = m.pair_index[p];
    InteractionTable it{a, b, {}};
    CompensatedSum ss;
    const std::size_t lb_count = fs[b].levels.size();
    it.effects.assign(fs[a].levels.size(), std::vector<double>(lb_count));
    for (std::size_t la = 0; la < fs[a].levels.size(); ++la) {
      for (std::size_t lb = 0; lb < lb_count; ++lb) {
        const double e = m.pair[p][la * lb_count + lb] -
                         (rep.overall_mean + rep.main_effects[a][la] + rep.main_effects[b][lb]);
        it.effects[la][lb] = e;
        ss.add(e * e);
      }
    }
    const double per_cell = n / static_cast<double>(fs[a].levels.size() * lb_count);
    rep.allocation.push_back({fs[a].name + " x " + fs[b].name, {a, b}, per_cell * ss.value(), 0.0});
    rep.interactions.push_back(std::move(it));
  }

  CompensatedSum explained;
  for (auto& a : rep.allocation) {
    if (degenerate) a.variation = 0.0;
    a.percent = degenerate ? 0.0 : 100.0 * a.variation / rep.total_variation;
    explained.add(a.variation);
  }
  rep.residual_variation = rep.total_variation - explained.value();
  CompensatedSum pct;
  for (const auto& a : rep.allocation) pct.add(a.percent);
  rep.residual_percent = 100.0 - pct.value();
  return rep;
}

const Allocation& AnovaReport::find(const std::string& name) const {
  for (const auto& a : allocation) {
    if (a.name == name) return a;
  }
  throw AnovaError("no allocation named '" + name + "'");
}

std::vector<Allocation> AnovaReport::ranked() const {
  std::vector<Allocation> out = allocation;
  std::stable_sort(out.begin(), out.end(), [](const Allocation& x, const Allocation& y) { return x.percent > y.percent; });
  return out;
}

std::string AnovaReport::to_text() const {
  std::ostringstream out;
  char buf[256];
  out << "Allocation of variation: " << response << " (" << runs << " runs)\n";
  std::snprintf(buf, sizeof buf, "  overall mean %.6g, total variation %.6g\n\n", overall_mean, total_variation);
  out << buf;
  std::size_t width = 20;
  for (const auto& a : allocation) width = std::max(width, a.name.size());
  std::snprintf(buf, sizeof buf, "  %-*s %10s\n", static_cast<int>(width), "Factor/Interaction", "Allocation");
  out << buf;
  for (const auto& a : ranked()) {
    std::snprintf(buf, sizeof buf, "  %-*s %9.2f%%\n", static_cast<int>(width), a.name.c_str(), a.percent);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "  %-*s %9.2f%%\n", static_cast<int>(width), "Higher-order residual",
                residual_percent);
  out << buf;
  return out.str();
}

std::string AnovaReport::to_csv() const {
  std::ostringstream out;
  char buf[128];
  out << "term,kind,variation,percent\n";
  for (const auto& a : allocation) {
    std::snprintf(buf, sizeof buf, ",%s,%.10g,%.10g\n", a.factors.size() == 1 ? "main" : "interaction", a.variation,
                  a.percent);
    out << a.name << buf;
  }
  std::snprintf(buf, sizeof buf, "residual,residual,%.10g,%.10g\n", residual_variation, residual_percent);
  out << buf;
  return out.str();
}

}  // namespace afsim
