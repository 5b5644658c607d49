#include "drw/errors.hpp"

#include <fmt/format.h>

namespace drw {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::IsolatedInitiator: return "IsolatedInitiator";
    case ErrorCode::StepBudgetExceeded: return "StepBudgetExceeded";
    case ErrorCode::Exhausted: return "Exhausted";
    case ErrorCode::TooManyInitiators: return "TooManyInitiators";
    case ErrorCode::BuildFailed: return "BuildFailed";
    case ErrorCode::EmptyOverlay: return "EmptyOverlay";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(fmt::format("{}: {}", to_string(code), message)), code_(code)
{
}

NotConnectedError::NotConnectedError(std::size_t attempts)
    : Error(ErrorCode::NotConnected,
            fmt::format("no connected placement after {} attempts", attempts)),
      attempts_(attempts)
{
}

BuildFailedError::BuildFailedError(std::uint32_t walk, ErrorCode cause, const std::string& detail)
    : Error(ErrorCode::BuildFailed,
            fmt::format("walk {} failed with {} ({})", walk, to_string(cause), detail)),
      walk_(walk), cause_(cause)
{
}

}  // namespace drw
