#include "bbs/carrier.hpp"

#include <algorithm>

#include "bbs/errors.hpp"

namespace bbs {

namespace {

void check_color(int kappa, int color) {
  if (color < 1 || color > kappa) throw InvalidArgument("carrier", "colour must be in {1..kappa}");
}

std::int64_t starting_load(Boundary boundary, std::optional<std::int64_t> edge_load,
                           std::int64_t first) {
  if (edge_load) {
    if (*edge_load < 0) throw InvalidArgument("carrier", "negative edge load", first);
    return *edge_load;
  }
  if (boundary == Boundary::Windowed)
    throw UndecidableError("carrier", "carrier load at the left edge is unknown", first);
  return 0;
}

}  // namespace

std::int64_t CarrierTrace::max_load() const noexcept {
  std::int64_t m = initial;
  for (auto w : loads) m = std::max(m, w);
  return m;
}

CarrierTrace run_carrier(const Configuration& config, int color,
                         std::optional<std::int64_t> edge_load) {
  config.validate();
  check_color(config.kappa, color);
  CarrierTrace t{color, config.offset, starting_load(config.boundary, edge_load, config.offset), {}};
  t.loads.reserve(config.cells.size());
  std::int64_t w = t.initial;
  for (int s : config.cells) {
    if (s == color)
      ++w;
    else if (s == 0 && w > 0)
      --w;
    t.loads.push_back(w);
  }
  return t;
}

CarrierTrace carrier_from_heights(const PathEncoding& path, int color,
                                  std::optional<std::int64_t> edge_load) {
  check_color(path.kappa, color);
  const std::int64_t first = path.first_index();
  CarrierTrace t{color, path.offset, starting_load(path.boundary, edge_load, path.offset), {}};
  std::int64_t sup = height(path, color, first) + t.initial;
  t.loads.reserve(path.rows() > 0 ? path.rows() - 1 : 0);
  for (std::int64_t n = first + 1; n <= path.last_index(); ++n) {
    const std::int64_t a = height(path, color, n);
    sup = std::max(sup, a);
    t.loads.push_back(sup - a);
  }
  return t;
}

Configuration apply_Ti_direct(const Configuration& config, int color,
                              std::optional<std::int64_t> edge_load) {
  const CarrierTrace t = run_carrier(config, color, edge_load);
  Configuration out = config;
  std::int64_t prev = t.initial;
  for (std::size_t k = 0; k < out.cells.size(); ++k) {
    const int s = config.cells[k];
    if (s == color)
      out.cells[k] = 0;
    else if (s == 0)
      out.cells[k] = t.loads[k] == prev - 1 ? color : 0;
    prev = t.loads[k];
  }
  if (config.boundary == Boundary::FiniteSupport)
    out.cells.insert(out.cells.end(), static_cast<std::size_t>(prev), color);
  return out;
}

Configuration mirror(const Configuration& config) {
  Configuration out = config;
  out.offset = -config.last();
  std::reverse(out.cells.begin(), out.cells.end());
  return out;
}

Configuration apply_Ti_inverse_direct(const Configuration& config, int color,
                                      std::optional<std::int64_t> edge_load) {
  return mirror(apply_Ti_direct(mirror(config), color, edge_load));
}

}  // namespace bbs
