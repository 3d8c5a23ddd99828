#include "rfcover/common.hpp"

namespace rfcover {

std::string_view class_name(Label y) noexcept {
    switch (y) {
    case Label::BS1: return "bs1";
    case Label::None: return "none";
    case Label::BS2: return "bs2";
    }
    return "?";
}

}  // namespace rfcover
