#include "prbox/core.hpp"

namespace prbox {

std::string_view to_string(Color color) noexcept {
  return color == Color::Yellow ? "yellow" : "red";
}

std::string_view to_string(Party party) noexcept {
  return party == Party::Alice ? "alice" : "bob";
}

}  // namespace prbox
