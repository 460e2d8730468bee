#include "pdrwm/csv.hpp"

#include "pdrwm/errors.hpp"

namespace pdrwm {

void write_header_comment(std::ostream& out, const std::string& config_digest, std::uint64_t seed) {
  out << "# config_digest=" << config_digest << " seed=" << seed << '\n';
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace pdrwm
