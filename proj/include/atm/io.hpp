#pragma once

// JSON and text renderings of tableaux and convergence reports.
// Rationals are emitted as {"exact": "p/q", "decimal": "<17 significant digits>"}.

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "atm/convergence.hpp"
#include "atm/format.hpp"
#include "atm/rational.hpp"
#include "atm/tableau.hpp"

namespace atm {

inline nlohmann::ordered_json rational_json(const Rational& r) {
  return {{"exact", to_string(r)}, {"decimal", format_real(r.get_d())}};
}

inline nlohmann::ordered_json report_json(const StructuralReport& rep) {
  nlohmann::ordered_json j;
  j["nilpotency_index"] = rep.nilpotency_index;
  j["rank"] = rep.rank;
  j["augmented_rank"] = rep.augmented_rank;
  j["is_block_strictly_lower"] = rep.is_block_strictly_lower;
  j["stage_count_ok"] = rep.stage_count_ok;
  j["abscissae_are_offsets"] = rep.abscissae_are_offsets;
  j["abscissae_are_row_sums"] = rep.abscissae_are_row_sums;
  j["columns_proportional"] = rep.columns_proportional;
  j["weights_sum"] = rational_json(rep.weights_sum);
  j["weighted_abscissae_sum"] = rational_json(rep.weighted_abscissae_sum);
  j["degenerate"] = rep.degenerate;
  return j;
}

inline nlohmann::ordered_json tableau_json(const ButcherTableau& tab) {
  nlohmann::ordered_json j;
  j["order"] = tab.order;
  j["stages"] = tab.stages;
  auto& index = j["index"] = nlohmann::ordered_json::array();
  for (const auto& s : tab.index) index.push_back({{"l", s.l}, {"i", s.i}});
  auto& a = j["A"] = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < tab.stages; ++r) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < tab.stages; ++c) row.push_back(rational_json(tab.A(r, c)));
    a.push_back(std::move(row));
  }
  auto& b = j["b"] = nlohmann::ordered_json::array();
  for (const auto& x : tab.b) b.push_back(rational_json(x));
  auto& c = j["c"] = nlohmann::ordered_json::array();
  for (const auto& x : tab.c) c.push_back(rational_json(x));
  return j;
}

/// The Butcher array as aligned exact-rational text:
///
///     c_1 | A_11 ... A_1n
///     ... | ...
///         | b_1  ... b_n
inline std::string render_tableau_text(const ButcherTableau& tab) {
  const std::size_t n = tab.stages;
  std::vector<std::vector<std::string>> cells(n + 1, std::vector<std::string>(n + 1));
  for (std::size_t r = 0; r < n; ++r) {
    cells[r][0] = to_string(tab.c[r]);
    for (std::size_t c = 0; c < n; ++c) cells[r][c + 1] = to_string(tab.A(r, c));
  }
  for (std::size_t c = 0; c < n; ++c) cells[n][c + 1] = to_string(tab.b[c]);

  std::vector<std::size_t> width(n + 1, 1);
  for (const auto& row : cells)
    for (std::size_t c = 0; c <= n; ++c) width[c] = std::max(width[c], row[c].size());

  std::ostringstream os;
  for (std::size_t r = 0; r <= n; ++r) {
    if (r == n) {
      os << std::string(width[0], '-') << "-+";
      for (std::size_t c = 1; c <= n; ++c) os << std::string(width[c] + 1, '-');
      os << '\n';
    }
    os << std::string(width[0] - cells[r][0].size(), ' ') << cells[r][0] << " |";
    for (std::size_t c = 1; c <= n; ++c) os << ' ' << std::string(width[c] - cells[r][c].size(), ' ') << cells[r][c];
    os << '\n';
  }
  return os.str();
}

inline std::string render_report_text(const StructuralReport& rep) {
  std::ostringstream os;
  os << "order                    " << rep.order << '\n'
     << "stages                   " << rep.stages << (rep.stage_count_ok ? " (closed form ok)" : " (MISMATCH)") << '\n'
     << "nilpotency index         " << rep.nilpotency_index << '\n'
     << "rank(A)                  " << rep.rank << '\n'
     << "rank([A; b])             " << rep.augmented_rank << '\n'
     << "block strictly lower     " << (rep.is_block_strictly_lower ? "yes" : "no") << '\n'
     << "c = stage offsets        " << (rep.abscissae_are_offsets ? "yes" : "no") << '\n'
     << "columns proportional     " << (rep.columns_proportional ? "yes" : "no") << '\n'
     << "sum b                    " << to_string(rep.weights_sum) << '\n'
     << "sum b c                  " << to_string(rep.weighted_abscissae_sum) << '\n';
  if (rep.degenerate) os << "note                     order 1 is explicit Euler; A is the 1x1 zero matrix\n";
  return os.str();
}

inline nlohmann::ordered_json convergence_json(const ConvergenceReport& rep) {
  nlohmann::ordered_json j;
  j["problem"] = rep.problem;
  j["order"] = rep.order;
  j["t_end"] = format_real(rep.t_end);
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.rows) {
    nlohmann::ordered_json row;
    row["h"] = format_real(r.h);
    row["n_steps"] = r.n_steps;
    row["error"] = format_real(r.error);
    row["observed_order"] = r.observed_order ? nlohmann::ordered_json(format_real(*r.observed_order)) : nullptr;
    row["rhs_evals"] = r.rhs_evals;
    rows.push_back(std::move(row));
  }
  return j;
}

}  // namespace atm
