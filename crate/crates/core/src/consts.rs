//! Binary expansions of pi and ln 2, stored as hex mantissas scaled by 2^-4222.

pub(crate) const MANTISSA_SCALE: i64 = -4222;

pub(crate) const PI_HEX: &[&str] = &[
    "c90fdaa22168c234c4c6628b80dc1cd129024e088a67cc74020bbea63b139b22514a08798e3404ddef9519b3cd3a431b",
    "302b0a6df25f14374fe1356d6d51c245e485b576625e7ec6f44c42e9a637ed6b0bff5cb6f406b7edee386bfb5a899fa5",
    "ae9f24117c4b1fe649286651ece45b3dc2007cb8a163bf0598da48361c55d39a69163fa8fd24cf5f83655d23dca3ad96",
    "1c62f356208552bb9ed529077096966d670c354e4abc9804f1746c08ca18217c32905e462e36ce3be39e772c180e8603",
    "9b2783a2ec07a28fb5c55df06f4c52c9de2bcbf6955817183995497cea956ae515d2261898fa051015728e5a8aaac42d",
    "ad33170d04507a33a85521abdf1cba64ecfb850458dbef0a8aea71575d060c7db3970f85a6e1e4c7abf5ae8cdb0933d7",
    "1e8c94e04a25619dcee3d2261ad2ee6bf12ffa06d98a0864d87602733ec86a64521f2b18177b200cbbe117577a615d6c",
    "770988c0bad946e208e24fa074e5ab3143db5bfce0fd108e4b82d120a92108011a723c12a787e6d788719a10bdba5b26",
    "99c327186af4e23c1a946834b6150bda2583e9ca2ad44ce8dbbbc2db04de8ef92e8efc141fbecaa6287c59474e6bc05d",
    "99b2964fa090c3a2233ba186515be7ed1f612970cee2d7afb81bdd762170481cd0069127d5b05aa993b4ea988d8fddc1",
    "86ffb7dc90a6c08f4df435c93402849236c3fab4d27c7026c1d4dcb2602646dec9751e763dba37bdf8ff9406ad9e530e",
];

pub(crate) const LN2_HEX: &[&str] = &[
    "2c5c85fdf473de6af278ece600fcbdabd03cd0c99ca62d8b628345d6e2eabe8af9ee1d881b7aeb26156554bed2be86c4",
    "3b4bab8d704e085109d5ceca445a6e094fa5b2858892ba3146b2f6844c5f0e1fae7aa6f0ec4d980ec95be83b1d95fdd2",
    "dcb3a1ec67595232bd77e9af4e0c0c921957e861cbc838e8b68b65f143cff57181fd32847ed6fee418434c3e23f95468",
    "bb95a75b7f07be855f4b88f785002ce585d181dd76e264397250f9ccad1e734cf333139964e4d45313068782f4758257",
    "4959a6cccd5928cddaa71fe2978523a081d36d80573f9ea8c312029505cd434b2557545e6c785ee76b8c4f36db181b2c",
    "41e3dcd746cb6cc6d7d42d4614193062d3458b6cecd9614f5d66286546b89cfb955c2db1a3e5a60d25b539b4cc2be226",
    "d12809551cc73723a85ca4f448a293be635bd45dfef3c1d549a29707e54e2e60986bff511ac728f3d7a488ae2319b4f1",
    "508860fb7265084242eec5bebcf6527c8db80ac833ba21ae41704a354f42f4be5884d8c65abd40c080183926420e4683",
    "15cce6e8afae9f414ab16d87313a481f3bcbc338b5cdce5635d889962407991aa546111837139d21c55b830a4904f578",
    "d8705a5b7492abaf51ce09bf68308e2e42ac446eef59f1c925cb3462feef67509b11c825b9d8457017dbdf3aeb27d16b",
    "b3b2dcbc670e0ce763da0989437aa247bc1ebffcea248dd385d7ad2bf236ab762176daac0e926f43702c6cc7628388fe",
];
