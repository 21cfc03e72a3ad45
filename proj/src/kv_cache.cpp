#include "spanattn/kv_cache.hpp"

#include <stdexcept>

namespace spanattn {

KVCache::KVCache(int layers, Index capacity, Index dim) : capacity_(capacity), dim_(dim) {
    if (layers < 1 || capacity < 1 || dim < 1) throw DimensionError("invalid cache geometry");
    keys_.reserve(layers);
    values_.reserve(layers);
    for (int l = 0; l < layers; ++l) {
        keys_.emplace_back(Mat::Zero(capacity, dim));
        values_.emplace_back(Mat::Zero(capacity, dim));
    }
}

void KVCache::write_row(int layer, const RowVec& key, const RowVec& value) {
    if (length_ >= capacity_) throw CapacityError("KV-cache is full");
    if (key.size() != dim_ || value.size() != dim_) throw DimensionError("row width mismatch");
    keys_[layer].row(length_) = key;
    values_[layer].row(length_) = value;
}

void KVCache::advance() {
    if (length_ >= capacity_) throw CapacityError("KV-cache is full");
    ++length_;
}

void KVCache::write_rows(int layer, const Mat& keys, const Mat& values) {
    if (keys.rows() != values.rows() || keys.cols() != dim_ || values.cols() != dim_)
        throw DimensionError("bulk write shape mismatch");
    if (length_ + keys.rows() > capacity_) throw CapacityError("prompt exceeds KV-cache capacity");
    keys_[layer].middleRows(length_, keys.rows()) = keys;
    values_[layer].middleRows(length_, values.rows()) = values;
}

void KVCache::advance_by(Index count) {
    if (length_ + count > capacity_) throw CapacityError("KV-cache is full");
    length_ += count;
}

MatView KVCache::keys(int layer) const { return keys_[layer].topRows(length_); }

MatView KVCache::values(int layer) const { return values_[layer].topRows(length_); }

MatView KVCache::keys(int layer, Index head_start, Index head_dim) const {
    return keys_[layer].topRows(length_).middleCols(head_start, head_dim);
}

MatView KVCache::values(int layer, Index head_start, Index head_dim) const {
    return values_[layer].topRows(length_).middleCols(head_start, head_dim);
}

MatView KVCache::keys(int layer, Index head_start, Index head_dim, Index rows) const {
    if (rows > capacity_) throw DimensionError("view exceeds cache capacity");
    return keys_[layer].topRows(rows).middleCols(head_start, head_dim);
}

MatView KVCache::values(int layer, Index head_start, Index head_dim, Index rows) const {
    if (rows > capacity_) throw DimensionError("view exceeds cache capacity");
    return values_[layer].topRows(rows).middleCols(head_start, head_dim);
}

void KVCache::truncate(Index new_length) {
    if (new_length < 0 || new_length > length_) throw DimensionError("bad truncation length");
    length_ = new_length;
}

}  // namespace spanattn
