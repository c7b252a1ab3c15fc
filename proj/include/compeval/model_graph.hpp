#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace compeval::model {

enum class LayerKind {
  kConv2d,
  kLinear,
  kBatchNorm,
  kActivation,
  kPool,
  kElementwiseAdd,
};

const char* layer_kind_name(LayerKind kind);

// One node of the layer-level computation graph. Field relevance depends on
// `kind`; unused fields keep their defaults.
struct LayerSpec {
  std::string id;
  LayerKind kind = LayerKind::kConv2d;

  // conv2d
  std::uint64_t in_channels = 0;
  std::uint64_t out_channels = 0;
  bool has_bias = false;

  // conv2d + pool
  std::uint64_t kernel_h = 0;
  std::uint64_t kernel_w = 0;
  std::uint64_t stride = 1;
  std::uint64_t padding = 0;
  std::uint64_t groups = 1;

  // linear
  std::uint64_t in_features = 0;
  std::uint64_t out_features = 0;

  // batchnorm / activation / pool / elementwise_add
  std::uint64_t channels = 0;

  // Weight bit width of this layer when it differs from the model default.
  std::optional<std::uint64_t> bitwidth_override;

  // Surviving (non-zero) parameter count after pruning. Absent means dense.
  std::optional<std::uint64_t> nonzero_params;

  // Explicit input spatial size (h, w). Linearized residual branches tap
  // activations from earlier in the graph, so a layer may see a different
  // spatial size than the running state; this override pins it.
  std::optional<std::uint64_t> in_h;
  std::optional<std::uint64_t> in_w;
};

struct InputShape {
  std::uint64_t channels = 0;
  std::uint64_t height = 0;
  std::uint64_t width = 0;
};

struct ModelDescriptor {
  std::string name;
  std::uint64_t default_bitwidth = 32;
  InputShape input_shape;
  std::optional<std::uint64_t> measured_disk_size;  // bytes
  std::vector<LayerSpec> layers;
};

struct ParamStats {
  std::uint64_t total_params = 0;
  std::uint64_t nonzero_params = 0;
  double sparsity = 0.0;  // 1 - nonzero/total, 0 for empty models
};

// Basis used for the OPs term of the theoretical-speed product.
//   kMacs:               OPs = MACs (reproduces published MAC-based tables)
//   kOpsWithElementwise: OPs = 2*MACs + elementwise touches
enum class OpsBasis { kMacs, kOpsWithElementwise };

struct CostOptions {
  OpsBasis ops_basis = OpsBasis::kMacs;
  // Exponent applied to the per-layer bit width. 1.0 is the linear law;
  // 2.0 models multiplication-dominant hardware.
  double bitwidth_exponent = 1.0;
};

struct CostStats {
  std::uint64_t macs_dense = 0;
  // Dense MACs scaled per layer by its non-zero parameter fraction.
  double macs_effective = 0.0;
  // Element touches of batchnorm/activation/elementwise_add layers.
  std::uint64_t elementwise_ops = 0;
  // Parameter-count-weighted mean of per-layer bit widths (display rounding
  // is the caller's business).
  double bitwidth_bits = 0.0;
  double chats_dense = 0.0;
  double chats_effective = 0.0;
};

enum class SizeSource { kMeasured, kEstimated };

struct DiskSize {
  std::uint64_t bytes = 0;
  SizeSource source = SizeSource::kEstimated;
};

// Theoretical speed: OPs times bit width, integer exact.
// Throws MetricError on 64-bit overflow.
std::uint64_t chats_from_ops(std::uint64_t ops, std::uint64_t bitwidth_bits);

// Parses and validates a model descriptor document (JSON, schema in docs/).
// Throws ParseError naming the offending layer id on any violation.
ModelDescriptor parse_model_descriptor(const std::string& text);

// Per-layer parameter count; zero for layers without weights.
std::uint64_t layer_param_count(const LayerSpec& layer);

ParamStats count_params(const ModelDescriptor& m);

CostStats count_cost(const ModelDescriptor& m, const CostOptions& options = {});

// Measured size when the descriptor carries one, otherwise
// ceil(sum of params * bitwidth / 8) over the layers.
DiskSize disk_size(const ModelDescriptor& m);

}  // namespace compeval::model
