#ifndef PLUMESEG_PIPELINE_HPP
#define PLUMESEG_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace plumeseg {

/// Flat key=value run configuration. Unknown keys are rejected at parse
/// time; stage-specific keys are listed in the README.
class PipelineConfig {
public:
    static PipelineConfig parse(const std::string& text);
    static PipelineConfig from_file(const std::filesystem::path& path);

    /// Command-line overrides, applied after parsing ("key=value").
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const;  // throws if missing
    std::string get_or(const std::string& key, const std::string& fallback) const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::uint64_t seed() const;

    std::vector<std::string> stages() const;  // canonical execution order
    std::filesystem::path out_dir() const;

private:
    std::map<std::string, std::string> values_;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

/// CSV with header "stage,seconds", one row per executed stage in
/// execution order.
std::string report_timings(const std::vector<StageTiming>& timings);

/// Executes the selected stages in fixed order (synth, convert, pca,
/// midway, amsd, kmeans, spectral, mbo), writing every artifact under
/// out_dir plus timings.csv. Returns 0 on success; on failure the log
/// names the stage and cause and partial outputs are kept.
int run_pipeline(const PipelineConfig& config, std::ostream& log);

}  // namespace plumeseg

#endif
