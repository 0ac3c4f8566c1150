#ifndef DIRACSIM_ERRORS_HPP
#define DIRACSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace diracsim {

// Error categories map onto CLI exit codes: validation 2, integration 3, analysis 4.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IntegrationError : std::runtime_error {
    explicit IntegrationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct AnalysisError : std::runtime_error {
    explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitGeneric = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIntegration = 3;
inline constexpr int kExitAnalysis = 4;

inline constexpr const char* kVersion = "1.0.0";

} // namespace diracsim

#endif
