#ifndef PLUMESEG_MBO_HPP
#define PLUMESEG_MBO_HPP

#include <cstdint>
#include <vector>

#include "plumeseg/cluster.hpp"
#include "plumeseg/errors.hpp"
#include "plumeseg/graph.hpp"
#include "plumeseg/types.hpp"

namespace plumeseg {

/// Raised when background subtraction finds nothing above threshold; the
/// per-video driver maps it to an all-background frame.
class EmptyChangeError : public DomainError {
public:
    using DomainError::DomainError;
};

struct MboConfig {
    double fidelity_strength = 30.0;  // C1
    double dt = 0.1;                  // diffusion time per outer iteration
    int inner_steps = 3;
    int max_outer_iters = 100;
    double stop_tol = 1e-6;
    int eigenpairs = 100;
    EigsConfig eigs{true, 300, 0};    // Nystrom by default
    Metric metric = Metric::Cosine;
    double sigma = 1.0;
    double init_quantile = 0.91;      // background-subtraction threshold
};

/// Trusted seed labels: weight 1 where the initialization is believed,
/// 0 in the uncertain ring; seed holds the +/-1 anchor values.
struct FidelityMask {
    int height = 0;
    int width = 0;
    std::vector<double> weight;  // lambda(x) in {0,1}
    std::vector<double> seed;    // u0 in {-1,+1}
};

/// Seed mask from inter-frame change: per-pixel channel-norm difference,
/// thresholded at its own `quantile`, cleaned by the 9x9 median (and
/// re-thresholded at 0.5). seed = +1 on the cleaned mask; trusted
/// background (weight 1, seed -1) everywhere outside a 3-pixel dilation of
/// the mask. Identical frames (or a mask emptied by the median) raise
/// EmptyChangeError.
FidelityMask initialize_from_background_subtraction(const FeatureImage& frame,
                                                    const FeatureImage& previous,
                                                    double quantile);

/// Ginzburg-Landau diagnostic split (interface parameter 1): the Dirichlet
/// term is evaluated in the truncated eigenspace.
struct GlEnergy {
    double dirichlet = 0.0;
    double potential = 0.0;  // sum (u^2-1)^2
    double fidelity = 0.0;   // sum (C1/2) lambda (u-u0)^2
    double total() const { return dirichlet + potential + fidelity; }
};

struct MboResult {
    PhaseField phase;
    int iterations = 0;
    std::vector<GlEnergy> trace;  // one entry per outer iteration
    bool collapsed = false;       // uniform output against opposing fidelity
};

/// Two-step scheme: (1) inner_steps semi-implicit diffusion substeps in
/// the truncated eigenspace, a_k <- (a_k - dt <phi_k, C1 lambda (u-u0)>)
/// / (1 + dt lambda_k) with u reconstituted between substeps; (2) pointwise
/// threshold, u >= 0 mapping to +1. Stops when ||u_{n+1}-u_n||^2 /
/// ||u_{n+1}||^2 < stop_tol (zero flips at the default tolerance) or at
/// max_outer_iters.
MboResult mbo_segment(const LaplacianEigs& eigs, const FidelityMask& fidelity,
                      const MboConfig& config);

/// Per-frame segmentation of a score video: frame t's graph uses frame t's
/// raw spectra, the initialization diffs frames (t, t-1). Frame 0 and
/// frames with no detected change come back all -1.
std::vector<PhaseField> segment_video(const ScoreVideo& scores,
                                      const MboConfig& config);

/// Same traversal, keeping iteration counts and energy traces per frame.
std::vector<MboResult> segment_video_detailed(const ScoreVideo& scores,
                                              const MboConfig& config);

}  // namespace plumeseg

#endif
