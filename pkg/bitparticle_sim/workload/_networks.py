import os

from bitparticle_sim.exceptions import InvalidParameter

PROFILE_DIR = os.path.join(os.path.dirname(__file__), 'profiles')

# bundled per-layer profiles, one CSV per network under PROFILE_DIR
NETWORK_PROFILES = ('resnet18', 'mobilenetv2', 'alexnet', 'vgg16')


def network_profile(name: str) -> str:
    """Path of the bundled sparsity profile of network `name`.

    The profiles follow the per-layer MAC counts of each network at
    224x224 input and carry typical 8-bit sparsities. MobileNetV2 has
    almost no zero activations; AlexNet and VGG16 have the most.
    """
    key = str(name).strip().lower()
    if key not in NETWORK_PROFILES:
        raise InvalidParameter(f"Unknown network profile: '{name}'. "
                               f"Expected one of {list(NETWORK_PROFILES)}.")
    return os.path.join(PROFILE_DIR, f'{key}.csv')
