#pragma once

#include <string>

#include "cadlag/path.hpp"
#include "cadlag/tensor.hpp"

namespace cadlag {

// Path envelope:
//   {"d":2, "level":1, "pieces":[
//      {"kind":"segment","t0":"0","t1":"0.5","log_increment":[...]},
//      {"kind":"jump","t":"0.5","log_jump":[...]} ]}
// Times may be decimal strings (parsed exactly to binary doubles) or numbers.
// Coefficient arrays hold levels 1..level concatenated in word order.
std::string path_to_json(const GroupPath& x);
GroupPath path_from_json(const std::string& text);
GroupPath load_path(const std::string& filename);
void save_path(const GroupPath& x, const std::string& filename);

// {"d":2,"level":2,"coeffs":[...]} with the scalar slot included
std::string tensor_to_json(const TruncatedTensor& u);
TruncatedTensor tensor_from_json(const std::string& text);

// word syntax "(1,2)" or "()"; letters as written
Word parse_word(const std::string& text);
std::string word_to_string(const Word& w);

} // namespace cadlag
