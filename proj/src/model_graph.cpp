#include "compeval/model_graph.hpp"

#include <cmath>
#include <set>
#include <unordered_set>

#include "compeval/errors.hpp"
#include "json.hpp"

namespace compeval::model {

namespace {

using nlohmann::json;

constexpr std::uint64_t kValidBitwidths[] = {1, 2, 4, 8, 16, 32, 64};

bool valid_bitwidth(std::uint64_t bits) {
  for (auto b : kValidBitwidths) {
    if (b == bits) return true;
  }
  return false;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw MetricError(std::string("64-bit overflow while computing ") + what);
  }
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw MetricError(std::string("64-bit overflow while computing ") + what);
  }
  return out;
}

[[noreturn]] void layer_error(const std::string& id, const std::string& msg) {
  throw ParseError("layer '" + id + "': " + msg);
}

std::uint64_t get_uint(const json& obj, const std::string& key,
                       const std::string& context) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(context + ": missing field '" + key + "'");
  }
  if (!it->is_number_integer() || (it->is_number_integer() && it->get<std::int64_t>() < 0 && !it->is_number_unsigned())) {
    throw ParseError(context + ": field '" + key +
                     "' must be a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

std::uint64_t get_positive(const json& obj, const std::string& key,
                           const std::string& context) {
  const std::uint64_t v = get_uint(obj, key, context);
  if (v == 0) {
    throw ParseError(context + ": field '" + key + "' must be positive");
  }
  return v;
}

std::uint64_t get_uint_or(const json& obj, const std::string& key,
                          std::uint64_t fallback, const std::string& context) {
  if (!obj.contains(key)) return fallback;
  return get_uint(obj, key, context);
}

LayerKind parse_kind(const std::string& s, const std::string& id) {
  if (s == "conv2d") return LayerKind::kConv2d;
  if (s == "linear") return LayerKind::kLinear;
  if (s == "batchnorm") return LayerKind::kBatchNorm;
  if (s == "activation") return LayerKind::kActivation;
  if (s == "pool") return LayerKind::kPool;
  if (s == "elementwise_add") return LayerKind::kElementwiseAdd;
  layer_error(id, "unknown kind '" + s + "'");
}

// Keys accepted per layer kind; anything else is rejected so typos surface
// in `validate` instead of silently dropping a field.
const std::set<std::string>& allowed_keys(LayerKind kind) {
  static const std::set<std::string> common = {"id", "kind", "bitwidth",
                                               "nonzero_params"};
  static const std::set<std::string> conv = [] {
    std::set<std::string> s = common;
    s.insert({"in_channels", "out_channels", "kernel_h", "kernel_w", "stride",
              "padding", "groups", "has_bias", "in_h", "in_w"});
    return s;
  }();
  static const std::set<std::string> linear = [] {
    std::set<std::string> s = common;
    s.insert({"in_features", "out_features", "has_bias"});
    return s;
  }();
  static const std::set<std::string> pool = [] {
    std::set<std::string> s = common;
    s.insert({"channels", "kernel_h", "kernel_w", "stride", "padding", "in_h",
              "in_w"});
    return s;
  }();
  static const std::set<std::string> channel_only = [] {
    std::set<std::string> s = common;
    s.insert("channels");
    return s;
  }();
  switch (kind) {
    case LayerKind::kConv2d:
      return conv;
    case LayerKind::kLinear:
      return linear;
    case LayerKind::kPool:
      return pool;
    default:
      return channel_only;
  }
}

LayerSpec parse_layer(const json& node, std::size_t index) {
  if (!node.is_object()) {
    throw ParseError("layers[" + std::to_string(index) + "]: must be an object");
  }
  LayerSpec layer;
  const auto id_it = node.find("id");
  if (id_it == node.end() || !id_it->is_string() ||
      id_it->get<std::string>().empty()) {
    throw ParseError("layers[" + std::to_string(index) +
                     "]: missing or empty 'id'");
  }
  layer.id = id_it->get<std::string>();

  const auto kind_it = node.find("kind");
  if (kind_it == node.end() || !kind_it->is_string()) {
    layer_error(layer.id, "missing 'kind'");
  }
  layer.kind = parse_kind(kind_it->get<std::string>(), layer.id);

  const auto& allowed = allowed_keys(layer.kind);
  for (const auto& [key, value] : node.items()) {
    (void)value;
    if (!allowed.count(key)) {
      layer_error(layer.id, "unexpected field '" + key + "' for kind '" +
                                layer_kind_name(layer.kind) + "'");
    }
  }

  const std::string ctx = "layer '" + layer.id + "'";
  switch (layer.kind) {
    case LayerKind::kConv2d:
      layer.in_channels = get_positive(node, "in_channels", ctx);
      layer.out_channels = get_positive(node, "out_channels", ctx);
      layer.kernel_h = get_positive(node, "kernel_h", ctx);
      layer.kernel_w = get_positive(node, "kernel_w", ctx);
      layer.stride = get_uint_or(node, "stride", 1, ctx);
      layer.padding = get_uint_or(node, "padding", 0, ctx);
      layer.groups = get_uint_or(node, "groups", 1, ctx);
      if (layer.stride == 0) layer_error(layer.id, "stride must be positive");
      if (layer.groups == 0) layer_error(layer.id, "groups must be positive");
      if (layer.in_channels % layer.groups != 0 ||
          layer.out_channels % layer.groups != 0) {
        layer_error(layer.id, "groups must divide channels");
      }
      if (node.contains("has_bias")) {
        if (!node["has_bias"].is_boolean()) {
          layer_error(layer.id, "has_bias must be a boolean");
        }
        layer.has_bias = node["has_bias"].get<bool>();
      }
      break;
    case LayerKind::kLinear:
      layer.in_features = get_positive(node, "in_features", ctx);
      layer.out_features = get_positive(node, "out_features", ctx);
      if (node.contains("has_bias")) {
        if (!node["has_bias"].is_boolean()) {
          layer_error(layer.id, "has_bias must be a boolean");
        }
        layer.has_bias = node["has_bias"].get<bool>();
      }
      break;
    case LayerKind::kPool:
      layer.channels = get_positive(node, "channels", ctx);
      layer.kernel_h = get_positive(node, "kernel_h", ctx);
      layer.kernel_w = get_positive(node, "kernel_w", ctx);
      layer.stride = get_uint_or(node, "stride", 1, ctx);
      layer.padding = get_uint_or(node, "padding", 0, ctx);
      if (layer.stride == 0) layer_error(layer.id, "stride must be positive");
      break;
    case LayerKind::kBatchNorm:
    case LayerKind::kActivation:
    case LayerKind::kElementwiseAdd:
      layer.channels = get_positive(node, "channels", ctx);
      break;
  }

  if (node.contains("bitwidth")) {
    const std::uint64_t bits = get_positive(node, "bitwidth", ctx);
    if (!valid_bitwidth(bits)) {
      layer_error(layer.id, "bitwidth must be one of 1,2,4,8,16,32,64");
    }
    layer.bitwidth_override = bits;
  }
  if (node.contains("nonzero_params")) {
    const std::uint64_t nz = get_uint(node, "nonzero_params", ctx);
    const std::uint64_t total = layer_param_count(layer);
    if (nz > total) {
      layer_error(layer.id, "nonzero_params (" + std::to_string(nz) +
                                ") exceeds total params (" +
                                std::to_string(total) + ")");
    }
    layer.nonzero_params = nz;
  }
  const bool has_h = node.contains("in_h");
  const bool has_w = node.contains("in_w");
  if (has_h != has_w) {
    layer_error(layer.id, "in_h and in_w must be given together");
  }
  if (has_h) {
    layer.in_h = get_positive(node, "in_h", ctx);
    layer.in_w = get_positive(node, "in_w", ctx);
  }
  return layer;
}

std::uint64_t layer_bitwidth(const ModelDescriptor& m, const LayerSpec& layer) {
  return layer.bitwidth_override.value_or(m.default_bitwidth);
}

// Spatial state threaded through the layer list while counting MACs.
struct SpatialState {
  std::uint64_t channels;
  std::uint64_t height;
  std::uint64_t width;
};

std::uint64_t propagate_dim(std::uint64_t in, std::uint64_t kernel,
                            std::uint64_t stride, std::uint64_t padding,
                            const std::string& id) {
  const std::int64_t padded =
      static_cast<std::int64_t>(in) + 2 * static_cast<std::int64_t>(padding) -
      static_cast<std::int64_t>(kernel);
  if (padded < 0) {
    throw MetricError("layer '" + id +
                      "': non-positive propagated spatial dimension "
                      "(kernel exceeds padded input)");
  }
  return static_cast<std::uint64_t>(padded) / stride + 1;
}

}  // namespace

const char* layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv2d:
      return "conv2d";
    case LayerKind::kLinear:
      return "linear";
    case LayerKind::kBatchNorm:
      return "batchnorm";
    case LayerKind::kActivation:
      return "activation";
    case LayerKind::kPool:
      return "pool";
    case LayerKind::kElementwiseAdd:
      return "elementwise_add";
  }
  return "?";
}

std::uint64_t chats_from_ops(std::uint64_t ops, std::uint64_t bitwidth_bits) {
  return checked_mul(ops, bitwidth_bits, "theoretical speed (ops * bitwidth)");
}

ModelDescriptor parse_model_descriptor(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed descriptor document: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("descriptor root must be an object");
  }
  static const std::set<std::string> top_keys = {
      "name", "default_bitwidth", "input_shape", "measured_disk_size_bytes",
      "layers"};
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (!top_keys.count(key)) {
      throw ParseError("descriptor: unexpected top-level field '" + key + "'");
    }
  }

  ModelDescriptor m;
  if (!doc.contains("name") || !doc["name"].is_string() ||
      doc["name"].get<std::string>().empty()) {
    throw ParseError("descriptor: missing or empty 'name'");
  }
  m.name = doc["name"].get<std::string>();

  m.default_bitwidth = get_positive(doc, "default_bitwidth", "descriptor");
  if (!valid_bitwidth(m.default_bitwidth)) {
    throw ParseError("descriptor: default_bitwidth must be one of "
                     "1,2,4,8,16,32,64");
  }

  const auto shape_it = doc.find("input_shape");
  if (shape_it == doc.end() || !shape_it->is_array() || shape_it->size() != 3) {
    throw ParseError(
        "descriptor: input_shape must be [channels, height, width]");
  }
  std::uint64_t dims[3];
  for (int i = 0; i < 3; ++i) {
    const auto& d = (*shape_it)[i];
    if (!d.is_number_integer() || d.get<std::int64_t>() <= 0) {
      throw ParseError("descriptor: input_shape entries must be positive "
                       "integers");
    }
    dims[i] = d.get<std::uint64_t>();
  }
  m.input_shape = {dims[0], dims[1], dims[2]};

  if (doc.contains("measured_disk_size_bytes")) {
    m.measured_disk_size =
        get_uint(doc, "measured_disk_size_bytes", "descriptor");
  }

  const auto layers_it = doc.find("layers");
  if (layers_it == doc.end() || !layers_it->is_array() || layers_it->empty()) {
    throw ParseError("descriptor: 'layers' must be a non-empty array");
  }
  std::unordered_set<std::string> seen_ids;
  m.layers.reserve(layers_it->size());
  for (std::size_t i = 0; i < layers_it->size(); ++i) {
    LayerSpec layer = parse_layer((*layers_it)[i], i);
    if (!seen_ids.insert(layer.id).second) {
      layer_error(layer.id, "duplicate layer id");
    }
    m.layers.push_back(std::move(layer));
  }
  return m;
}

std::uint64_t layer_param_count(const LayerSpec& layer) {
  switch (layer.kind) {
    case LayerKind::kConv2d: {
      std::uint64_t weights = checked_mul(
          layer.out_channels, layer.in_channels / layer.groups, "conv params");
      weights = checked_mul(weights, layer.kernel_h, "conv params");
      weights = checked_mul(weights, layer.kernel_w, "conv params");
      return checked_add(weights, layer.has_bias ? layer.out_channels : 0,
                         "conv params");
    }
    case LayerKind::kLinear: {
      const std::uint64_t weights =
          checked_mul(layer.in_features, layer.out_features, "linear params");
      return checked_add(weights, layer.has_bias ? layer.out_features : 0,
                         "linear params");
    }
    case LayerKind::kBatchNorm:
      return checked_mul(2, layer.channels, "batchnorm params");
    case LayerKind::kActivation:
    case LayerKind::kPool:
    case LayerKind::kElementwiseAdd:
      return 0;
  }
  return 0;
}

ParamStats count_params(const ModelDescriptor& m) {
  ParamStats stats;
  for (const auto& layer : m.layers) {
    const std::uint64_t total = layer_param_count(layer);
    stats.total_params = checked_add(stats.total_params, total, "total params");
    stats.nonzero_params = checked_add(
        stats.nonzero_params, layer.nonzero_params.value_or(total),
        "nonzero params");
  }
  // Exact integer difference first, so the fraction is a single rounding.
  stats.sparsity =
      stats.total_params == 0
          ? 0.0
          : static_cast<double>(stats.total_params - stats.nonzero_params) /
                static_cast<double>(stats.total_params);
  return stats;
}

CostStats count_cost(const ModelDescriptor& m, const CostOptions& options) {
  CostStats stats;
  SpatialState state{m.input_shape.channels, m.input_shape.height,
                     m.input_shape.width};

  std::uint64_t chats_dense_int = 0;
  double chats_dense_fp = 0.0;
  double chats_effective = 0.0;
  std::uint64_t weighted_bits = 0;
  std::uint64_t total_params = 0;
  const bool linear_law = options.bitwidth_exponent == 1.0;

  for (const auto& layer : m.layers) {
    const std::uint64_t bits = layer_bitwidth(m, layer);
    const double bits_term = linear_law
                                 ? static_cast<double>(bits)
                                 : std::pow(static_cast<double>(bits),
                                            options.bitwidth_exponent);
    std::uint64_t macs = 0;
    std::uint64_t touches = 0;

    switch (layer.kind) {
      case LayerKind::kConv2d: {
        const std::uint64_t in_h = layer.in_h.value_or(state.height);
        const std::uint64_t in_w = layer.in_w.value_or(state.width);
        const std::uint64_t out_h = propagate_dim(in_h, layer.kernel_h,
                                                  layer.stride, layer.padding,
                                                  layer.id);
        const std::uint64_t out_w = propagate_dim(in_w, layer.kernel_w,
                                                  layer.stride, layer.padding,
                                                  layer.id);
        macs = checked_mul(out_h, out_w, "conv MACs");
        macs = checked_mul(macs, layer.out_channels, "conv MACs");
        macs = checked_mul(macs, layer.kernel_h, "conv MACs");
        macs = checked_mul(macs, layer.kernel_w, "conv MACs");
        macs = checked_mul(macs, layer.in_channels / layer.groups, "conv MACs");
        state = {layer.out_channels, out_h, out_w};
        break;
      }
      case LayerKind::kLinear:
        macs = checked_mul(layer.in_features, layer.out_features,
                           "linear MACs");
        state = {layer.out_features, 1, 1};
        break;
      case LayerKind::kPool: {
        const std::uint64_t in_h = layer.in_h.value_or(state.height);
        const std::uint64_t in_w = layer.in_w.value_or(state.width);
        const std::uint64_t out_h = propagate_dim(in_h, layer.kernel_h,
                                                  layer.stride, layer.padding,
                                                  layer.id);
        const std::uint64_t out_w = propagate_dim(in_w, layer.kernel_w,
                                                  layer.stride, layer.padding,
                                                  layer.id);
        state.height = out_h;
        state.width = out_w;
        break;
      }
      case LayerKind::kBatchNorm:
      case LayerKind::kActivation:
      case LayerKind::kElementwiseAdd:
        touches = checked_mul(layer.channels,
                              checked_mul(state.height, state.width,
                                          "elementwise touches"),
                              "elementwise touches");
        break;
    }

    stats.macs_dense = checked_add(stats.macs_dense, macs, "dense MACs");
    stats.elementwise_ops =
        checked_add(stats.elementwise_ops, touches, "elementwise ops");

    const std::uint64_t params = layer_param_count(layer);
    total_params = checked_add(total_params, params, "total params");
    weighted_bits = checked_add(
        weighted_bits, checked_mul(params, bits, "bit-weighted params"),
        "bit-weighted params");

    // Non-zero fraction scales a pruned layer's cost; dense layers keep 1.
    double nz_fraction = 1.0;
    if (layer.nonzero_params && params > 0) {
      nz_fraction = static_cast<double>(*layer.nonzero_params) /
                    static_cast<double>(params);
    }
    const double macs_eff = static_cast<double>(macs) * nz_fraction;
    stats.macs_effective += macs_eff;

    std::uint64_t ops_dense = macs;
    double ops_eff = macs_eff;
    if (options.ops_basis == OpsBasis::kOpsWithElementwise) {
      ops_dense = checked_add(checked_mul(2, macs, "ops"), touches, "ops");
      ops_eff = 2.0 * macs_eff + static_cast<double>(touches);
    }
    if (linear_law) {
      chats_dense_int = checked_add(chats_dense_int,
                                    chats_from_ops(ops_dense, bits),
                                    "dense theoretical speed");
    } else {
      chats_dense_fp += static_cast<double>(ops_dense) * bits_term;
    }
    chats_effective += ops_eff * bits_term;
  }

  stats.bitwidth_bits = total_params == 0
                            ? static_cast<double>(m.default_bitwidth)
                            : static_cast<double>(weighted_bits) /
                                  static_cast<double>(total_params);
  stats.chats_dense = linear_law ? static_cast<double>(chats_dense_int)
                                 : chats_dense_fp;
  stats.chats_effective = chats_effective;
  return stats;
}

DiskSize disk_size(const ModelDescriptor& m) {
  if (m.measured_disk_size) {
    return {*m.measured_disk_size, SizeSource::kMeasured};
  }
  std::uint64_t bits = 0;
  for (const auto& layer : m.layers) {
    bits = checked_add(bits,
                       checked_mul(layer_param_count(layer),
                                   layer_bitwidth(m, layer), "disk bits"),
                       "disk bits");
  }
  return {(bits + 7) / 8, SizeSource::kEstimated};
}

}  // namespace compeval::model
