#ifndef SIGVOL_DIGEST_HPP
#define SIGVOL_DIGEST_HPP

#include <string>
#include <string_view>

namespace sigvol {

// SHA-256 as a lowercase hex string; used for manifest output digests.
std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::string& filename);

}  // namespace sigvol

#endif
