#pragma once

#include <string>
#include <vector>

namespace fixtures {

// Minimal well-formedness check: declaration, balanced tags, quoted
// attributes, one root element. Returns true and clears `error` on success.
bool xml_well_formed(const std::string& text, std::string* error = nullptr);

// Values of every occurrence of an attribute, in document order.
std::vector<std::string> xml_attribute_values(const std::string& text,
                                              const std::string& attribute);

}  // namespace fixtures
