#include "support/xmlcheck.hpp"

#include <cctype>

namespace fixtures {

namespace {

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' ||
         c == '.';
}

}  // namespace

bool xml_well_formed(const std::string& text, std::string* error) {
  auto fail = [&](const std::string& msg) {
    if (error) *error = msg;
    return false;
  };

  std::vector<std::string> stack;
  std::size_t i = 0;
  const std::size_t n = text.size();
  int roots = 0;

  while (i < n) {
    if (text[i] != '<') {
      if (!std::isspace(static_cast<unsigned char>(text[i])) && stack.empty() && roots > 0)
        return fail("content outside root element");
      ++i;
      continue;
    }
    if (text.compare(i, 2, "<?") == 0) {
      const auto end = text.find("?>", i);
      if (end == std::string::npos) return fail("unterminated declaration");
      i = end + 2;
      continue;
    }
    if (text.compare(i, 4, "<!--") == 0) {
      const auto end = text.find("-->", i);
      if (end == std::string::npos) return fail("unterminated comment");
      i = end + 3;
      continue;
    }
    if (text.compare(i, 2, "</") == 0) {
      std::size_t j = i + 2;
      std::string name;
      while (j < n && name_char(text[j])) name += text[j++];
      while (j < n && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      if (j >= n || text[j] != '>') return fail("malformed closing tag");
      if (stack.empty() || stack.back() != name)
        return fail("mismatched closing tag: " + name);
      stack.pop_back();
      i = j + 1;
      continue;
    }
    // opening tag
    std::size_t j = i + 1;
    std::string name;
    while (j < n && name_char(text[j])) name += text[j++];
    if (name.empty()) return fail("empty tag name");
    bool self_closing = false;
    while (j < n && text[j] != '>') {
      if (text[j] == '"') {
        const auto end = text.find('"', j + 1);
        if (end == std::string::npos) return fail("unterminated attribute value");
        j = end + 1;
        continue;
      }
      if (text[j] == '/' && j + 1 < n && text[j + 1] == '>') {
        self_closing = true;
        ++j;
        break;
      }
      if (text[j] == '<') return fail("'<' inside tag");
      ++j;
    }
    if (j >= n) return fail("unterminated tag: " + name);
    if (stack.empty()) {
      if (++roots > 1) return fail("multiple root elements");
    }
    if (!self_closing) stack.push_back(name);
    i = j + 1;
  }
  if (!stack.empty()) return fail("unclosed element: " + stack.back());
  if (roots != 1) return fail("expected exactly one root element");
  if (error) error->clear();
  return true;
}

std::vector<std::string> xml_attribute_values(const std::string& text,
                                              const std::string& attribute) {
  std::vector<std::string> values;
  const std::string needle = attribute + "=\"";
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    // require a non-name char before, so stroke-width does not match width
    if (pos > 0 && name_char(text[pos - 1])) {
      pos += needle.size();
      continue;
    }
    const std::size_t start = pos + needle.size();
    const std::size_t end = text.find('"', start);
    if (end == std::string::npos) break;
    values.push_back(text.substr(start, end - start));
    pos = end + 1;
  }
  return values;
}

}  // namespace fixtures
