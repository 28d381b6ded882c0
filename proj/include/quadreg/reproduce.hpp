#pragma once

// One-shot reproduction suite behind `quadreg reproduce-paper`.

#include <optional>
#include <string>
#include <vector>

#include "quadreg/exactlin.hpp"
#include "quadreg/serialize.hpp"

namespace quadreg {

struct ReproduceOptions {
  std::optional<std::string> only;   // run a single item by id
  std::optional<RatMat> cost;        // replaces the 5 x 5 counterexample cost
  std::string out_dir = ".";
  bool timestamp = true;             // also controls per-item timings
};

struct ItemResult {
  std::string id;
  int criterion = 0;
  bool pass = false;
  double seconds = 0.0;
  Json detail;
};

struct ReproduceReport {
  std::vector<ItemResult> items;
  bool all_pass = true;
  Json to_json(bool timestamp) const;
};

// Item ids in criterion order.
const std::vector<std::string>& reproduce_item_ids();

// Runs the selected items and writes report.json and
// counterexample_weights.csv into out_dir. `--only weight-curve` writes the
// CSV alone. Throws std::invalid_argument for an unknown item id.
ReproduceReport reproduce(const ReproduceOptions& options);

}  // namespace quadreg
