#pragma once

namespace kgalign {

// Patience-based early stopping on a validation score: stop after `patience`
// consecutive observations below the running best.
class EarlyStopper {
 public:
  explicit EarlyStopper(int patience) : patience_(patience) {}

  // Feed one validation score; returns true when training should stop.
  bool observe(double score) {
    if (score > best_) {
      best_ = score;
      improved_ = true;
      bad_ = 0;
    } else {
      improved_ = false;
      ++bad_;
    }
    return bad_ >= patience_;
  }

  // Seeds the running best (e.g. with the pre-training score) without
  // counting it against patience.
  void seed_best(double score) { best_ = score; }

  bool improved() const { return improved_; }
  double best() const { return best_; }
  int consecutive_bad() const { return bad_; }

 private:
  int patience_;
  double best_ = -1.0;
  bool improved_ = false;
  int bad_ = 0;
};

}  // namespace kgalign
