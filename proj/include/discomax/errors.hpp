#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace discomax {

// Error taxonomy shared by the library and the CLI. code() is the stable
// machine-readable tag the CLI prints as `ERROR <CODE>: ...`.
class error : public std::runtime_error {
public:
  error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

struct shape_error : error {
  explicit shape_error(const std::string& m) : error("SHAPE", m) {}
};

struct not_psd_error : error {
  explicit not_psd_error(const std::string& m) : error("NOT_PSD", m) {}
};

struct degenerate_error : error {
  explicit degenerate_error(const std::string& m) : error("DEGENERATE", m) {}
};

struct config_error : error {
  explicit config_error(const std::string& m) : error("CONFIG", m) {}
};

struct csv_error : error {
  explicit csv_error(const std::string& m) : error("CSV", m) {}
};

struct io_error : error {
  explicit io_error(const std::string& m) : error("IO", m) {}
};

struct nonfinite_error : error {
  explicit nonfinite_error(const std::string& m) : error("NONFINITE", m) {}
};

// Command-line misuse; the CLI maps this to exit status 2.
struct usage_error : error {
  explicit usage_error(const std::string& m) : error("USAGE", m) {}
};

}  // namespace discomax
