#include "difftaylor/generators.hpp"

#include <stdexcept>

namespace difftaylor {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

FieldSpec parse_field(const std::string& name) {
  if (name == "Q") return {name, 0};
  if (name.size() >= 2 && name[0] == 'F' && name.find_first_not_of("0123456789", 1) == std::string::npos &&
      name.size() <= 20) {
    const std::uint64_t p = std::stoull(name.substr(1));
    if (is_prime(p)) return {name, p};
  }
  throw std::invalid_argument("unknown field \"" + name + "\"; expected Q or F<prime>");
}

}  // namespace difftaylor
