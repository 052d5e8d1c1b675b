#ifndef INFODECOMP_VERSION_HPP
#define INFODECOMP_VERSION_HPP

namespace infodecomp {

inline constexpr const char* kToolName = "infodecomp";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace infodecomp

#endif  // INFODECOMP_VERSION_HPP
