#ifndef SIGTESTSIM_ERRORS_HPP
#define SIGTESTSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sigtestsim {

// Base class for all library errors. Subclasses map to CLI exit codes:
// data problems -> 3, numeric failures -> 4.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

class insufficient_sample_error : public error {
 public:
  explicit insufficient_sample_error(const std::string& msg) : error(msg) {}
};

class degenerate_sample_error : public error {
 public:
  explicit degenerate_sample_error(const std::string& msg) : error(msg) {}
};

class all_ties_error : public error {
 public:
  explicit all_ties_error(const std::string& msg) : error(msg) {}
};

class invalid_configuration_error : public error {
 public:
  explicit invalid_configuration_error(const std::string& msg) : error(msg) {}
};

class invalid_data_error : public error {
 public:
  explicit invalid_data_error(const std::string& msg) : error(msg) {}
};

class invalid_argument_error : public error {
 public:
  explicit invalid_argument_error(const std::string& msg) : error(msg) {}
};

class enumeration_too_large_error : public error {
 public:
  explicit enumeration_too_large_error(const std::string& msg) : error(msg) {}
};

class unreachable_mean_error : public error {
 public:
  explicit unreachable_mean_error(const std::string& msg) : error(msg) {}
};

class numeric_failure_error : public error {
 public:
  explicit numeric_failure_error(const std::string& msg) : error(msg) {}
};

class insufficient_systems_error : public error {
 public:
  explicit insufficient_systems_error(const std::string& msg) : error(msg) {}
};

class parse_error : public error {
 public:
  explicit parse_error(const std::string& msg) : error(msg) {}
};

}  // namespace sigtestsim

#endif  // SIGTESTSIM_ERRORS_HPP
