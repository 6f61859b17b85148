#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bbs/lattice.hpp"

namespace bbs {

/// Carrier load W_n for the sites offset .. offset+loads.size()-1.
/// `initial` is the load just left of the window.
struct CarrierTrace {
  int color = 1;
  std::int64_t offset = 0;
  std::int64_t initial = 0;
  std::vector<std::int64_t> loads;

  std::int64_t final_load() const noexcept { return loads.empty() ? initial : loads.back(); }
  std::int64_t max_load() const noexcept;
};

/// W_n = W_{n-1} + 1 if eta_n = i, W_{n-1} - 1 if eta_n = 0 and W_{n-1} > 0,
/// W_{n-1} otherwise.
///
/// The carrier enters the window empty under FiniteSupport. Windowed
/// configurations need the load at the left edge (`edge_load`), otherwise
/// UndecidableError.
CarrierTrace run_carrier(const Configuration& config, int color,
                         std::optional<std::int64_t> edge_load = std::nullopt);

/// W_n = sup_{m<=n} A_i S_m - A_i S_n, with the supremum over the left tail
/// reduced to A_i S at the first row plus the edge load.
CarrierTrace carrier_from_heights(const PathEncoding& path, int color,
                                  std::optional<std::int64_t> edge_load = std::nullopt);

/// T_i by the carrier rule: colour-i balls are picked up and dropped at the
/// next empty site, other colours stay put. Under FiniteSupport the window
/// grows to the right by the final carrier load so that every ball lands.
/// Under Windowed the window is kept and balls still carried at the right
/// edge leave it.
Configuration apply_Ti_direct(const Configuration& config, int color,
                              std::optional<std::int64_t> edge_load = std::nullopt);

/// T_i^{-1} by the mirrored carrier rule: balls travel left. `edge_load`
/// is the load entering from the right edge.
Configuration apply_Ti_inverse_direct(const Configuration& config, int color,
                                      std::optional<std::int64_t> edge_load = std::nullopt);

/// n -> -n on the sites.
Configuration mirror(const Configuration& config);

}  // namespace bbs
