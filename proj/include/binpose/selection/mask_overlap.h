#pragma once

#include "binpose/render/image.h"

namespace binpose::selection {

using render::Mask;

/// Pixel-wise overlap
///   s = 1/2 * ( |O+ ∩ R+| / |O+|  +  |R- ∩ O-| / |R-| )
/// where O is the observed mask, R the rendered one, + foreground and
/// - background. Note the second term is normalised by the rendered
/// background, not the observed one.
///
/// Throws PreconditionError on a size mismatch, an empty observed foreground
/// or an empty rendered background.
double MaskOverlapScore(const Mask& rendered, const Mask& observed);

/// 1 - MaskOverlapScore, in [0, 1].
double MaskDistance(const Mask& rendered, const Mask& observed);

}  // namespace binpose::selection
