#ifndef RELX_UTF8_HPP
#define RELX_UTF8_HPP

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace relx::utf8 {

// Byte offset of every scalar-value boundary in `text`: element i is where
// the i-th code point starts, and the last element is text.size(). Returns
// nullopt if `text` is not well-formed UTF-8.
std::optional<std::vector<std::size_t>> boundaries(std::string_view text);

// Number of Unicode scalar values, or nullopt for ill-formed input.
std::optional<std::size_t> length(std::string_view text);

}  // namespace relx::utf8

#endif  // RELX_UTF8_HPP
