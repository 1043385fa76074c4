#ifndef GGLOPT_CORE_VERSION_HPP_
#define GGLOPT_CORE_VERSION_HPP_

namespace gglopt {

// Keep in sync with the project() version in the top-level CMakeLists.txt.
inline constexpr const char* kVersion = "0.1.0";

}  // namespace gglopt

#endif  // GGLOPT_CORE_VERSION_HPP_
