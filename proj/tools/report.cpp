#include <algorithm>
#include <sstream>

#include "cli.hpp"

namespace wz::cli {

std::string Report::render(Format f) const {
  std::ostringstream out;
  const std::string status = failed_ ? "violation" : "ok";
  if (f == Format::Lines) {
    out << "command: " << command_ << "\n";
    for (auto& [k, v] : items_) out << k << ": " << v << "\n";
    out << "status: " << status << "\n";
    return out.str();
  }
  size_t width = 0;
  for (auto& kv : items_) width = std::max(width, kv.first.size());
  out << command_ << "\n" << std::string(command_.size(), '=') << "\n";
  for (auto& [k, v] : items_) out << "  " << k << std::string(width - k.size() + 2, ' ') << v << "\n";
  out << "\n" << (failed_ ? "VIOLATION" : "OK") << "\n";
  return out.str();
}

}  // namespace wz::cli
