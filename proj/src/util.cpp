#include "irlsum/util.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "irlsum/rng.hpp"

namespace irlsum {

std::string bytes_hash_hex(const std::string& bytes) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(bytes);
  return os.str();
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for hashing: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return bytes_hash_hex(buf.str());
}

}  // namespace irlsum
