#ifndef TWN_ERROR_HPP
#define TWN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace twn {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(const std::string &msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line), column_(column)
  {
  }
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

// A precondition of an operation was violated (e.g. closed form of a non-tnn loop).
class PreconditionError : public Error {
public:
  using Error::Error;
};

} // namespace twn

#endif
