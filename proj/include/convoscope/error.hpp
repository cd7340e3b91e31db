#pragma once

#include <stdexcept>
#include <string>

namespace convoscope {

enum class ErrorKind {
    ParseError,
    IoError,
    InvalidConfig,
    DuplicatePostId,
    DuplicateAuthor,
    NoRoot,
    CycleDetected,
    UnknownPost,
    UnknownConversation,
    AuthorNotInConversation,
    EmptyInput,
    InvalidAlpha,
    NoConvergence,
    NoConversations,
};

const char* to_string(ErrorKind kind);

// All failures surface as this exception; the CLI maps kinds to exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace convoscope
