#ifndef CRITWAVE_ARTIFACTS_HPP
#define CRITWAVE_ARTIFACTS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace critwave {

// Locale-independent %.17g-style formatting; round-trips doubles exactly.
std::string format_double(double value, int significant_digits = 17);

// SHA-1 of "blob <len>\0<content>", hex-encoded (content-addressed id of a
// config body, matching the usual blob convention).
std::string content_hash(const std::string& content);

// Writes via a temporary file in the same directory, then renames.
void atomic_write_file(const std::string& path, const std::string& content);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);
    void add_row(const std::vector<double>& values);
    void add_raw_row(const std::vector<std::string>& values);
    const std::string& str() const { return body_; }

private:
    std::size_t n_columns_;
    std::string body_;
};

}  // namespace critwave

#endif
