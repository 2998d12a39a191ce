#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace snplr {

/// Malformed input file or record; carries a 1-based line number when known.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line == 0 ? what
                                       : what + " (line " + std::to_string(line) + ")"),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// The evidence probability under Hd vanished: the likelihood ratio is 0/0.
/// Distinct from LR == 0, which is a valid (exclusionary) result.
class undefined_lr_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Estimation was requested on an empty table.
class no_data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace snplr
