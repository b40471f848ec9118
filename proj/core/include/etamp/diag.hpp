#ifndef ETAMP_DIAG_HPP
#define ETAMP_DIAG_HPP

#include <stdexcept>
#include <string>

namespace etamp {

enum class DiagKind {
  SyntaxError,
  UnsupportedRequirement,
  UndeclaredSymbol,
  TypeMismatch,
  IoError,
};

inline const char* diag_kind_name(DiagKind k) {
  switch (k) {
    case DiagKind::SyntaxError: return "syntax error";
    case DiagKind::UnsupportedRequirement: return "unsupported requirement";
    case DiagKind::UndeclaredSymbol: return "undeclared symbol";
    case DiagKind::TypeMismatch: return "type mismatch";
    case DiagKind::IoError: return "io error";
  }
  return "error";
}

// Diagnostic carrying `file:line:col: severity: message`, the format every
// front end prints verbatim.
class ParseError : public std::runtime_error {
 public:
  ParseError(DiagKind kind, std::string file, int line, int col, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(col) +
                           ": error: " + message),
        m_kind(kind),
        m_file(std::move(file)),
        m_line(line),
        m_col(col) {}

  DiagKind kind() const { return m_kind; }
  const std::string& file() const { return m_file; }
  int line() const { return m_line; }
  int col() const { return m_col; }

 private:
  DiagKind m_kind;
  std::string m_file;
  int m_line;
  int m_col;
};

}  // namespace etamp

#endif
