#include "prgd/trace.hpp"

#include <array>
#include <string>
#include <utility>

#include "prgd/errors.hpp"

namespace prgd {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 5> kKindNames{{
    {EventKind::manifold_step, "manifold_step"},
    {EventKind::perturbation, "perturbation"},
    {EventKind::tangent_step, "tangent_step"},
    {EventKind::boundary_truncation, "boundary_truncation"},
    {EventKind::small_grad_visit, "small_grad_visit"},
}};

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

EventKind parse_event_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  throw InvalidInput("unknown event kind '" + std::string(text) + "'");
}

}  // namespace prgd
