#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emopair {

/// Base of every pipeline error. `kind()` is the stable machine-readable name
/// the CLI prints ahead of the message.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define EMOPAIR_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

EMOPAIR_DEFINE_ERROR(IoError);
EMOPAIR_DEFINE_ERROR(MalformedCorpus);
EMOPAIR_DEFINE_ERROR(AnnotationBackendError);
EMOPAIR_DEFINE_ERROR(SchemaViolation);
EMOPAIR_DEFINE_ERROR(EmptyDistribution);
EMOPAIR_DEFINE_ERROR(BoundsError);
EMOPAIR_DEFINE_ERROR(EmptyVocabulary);
EMOPAIR_DEFINE_ERROR(DegenerateOutcome);
EMOPAIR_DEFINE_ERROR(SeparationDetected);
EMOPAIR_DEFINE_ERROR(InvalidArgument);

#undef EMOPAIR_DEFINE_ERROR

/// A non-intercept design column that takes a single value on every row.
class ConstantColumn : public Error {
 public:
  ConstantColumn(std::size_t column, const std::string& message)
      : Error("ConstantColumn", message), column_(column) {}

  /// Zero-based feature index (the intercept is not counted).
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

}  // namespace emopair
