#pragma once

namespace polyphase {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace polyphase
