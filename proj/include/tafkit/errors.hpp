#pragma once

#include <stdexcept>
#include <string>

namespace tafkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural violations at construction time.
class GraphError : public Error { using Error::Error; };
class CyclicGraph : public GraphError { using GraphError::GraphError; };
class NotATree : public GraphError { using GraphError::GraphError; };
class AlgebraError : public Error { using Error::Error; };
class EmbeddingError : public Error { using Error::Error; };
class MismatchedLevels : public EmbeddingError { using EmbeddingError::EmbeddingError; };
class IllFormedAttachment : public EmbeddingError { using EmbeddingError::EmbeddingError; };
class MultiBlockUnsupported : public Error { using Error::Error; };
class TowerError : public Error { using Error::Error; };

// Operation preconditions.
class NotDecidedYes : public Error { using Error::Error; };
class UngradableLevel : public Error { using Error::Error; };
class GraphMismatch : public Error { using Error::Error; };
class PreconditionViolated : public Error { using Error::Error; };

class ParseError : public Error {
 public:
  ParseError(const std::string& context, const std::string& what)
      : Error(context.empty() ? what : context + ": " + what), context_(context) {}
  const std::string& context() const noexcept { return context_; }

 private:
  std::string context_;
};

}  // namespace tafkit
