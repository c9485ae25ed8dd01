#pragma once

#include <map>
#include <mutex>

namespace dilation {

/// Insert-once cache. Values are computed outside the lock so recursive
/// lookups are allowed; the first completed insertion wins and references
/// stay valid for the lifetime of the cache.
template <class Key, class Value>
class Memo {
 public:
  template <class Compute>
  const Value& get(const Key& key, Compute&& compute) const {
    {
      std::lock_guard lock(mutex_);
      const auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    Value value = compute();
    std::lock_guard lock(mutex_);
    return map_.emplace(key, std::move(value)).first->second;
  }

 private:
  mutable std::mutex mutex_;
  mutable std::map<Key, Value> map_;
};

}  // namespace dilation
