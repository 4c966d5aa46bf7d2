#ifndef BHCHAOS_VERSION_HPP
#define BHCHAOS_VERSION_HPP

namespace bhchaos {
inline constexpr const char* kVersion = "0.3.1";
}

#endif  // BHCHAOS_VERSION_HPP
