from pydantic_settings import BaseSettings

class Settings(BaseSettings):
    # Application
    log_level: str = "INFO"
    max_workers: int = 4
    output_dir: str = "output"

    # Scan evaluation
    parallel_scans: bool = True
    scan_chunk_size: int = 64

    # Power quadrature (the power command also runs at twice these counts)
    power_grid_theta: int = 64
    power_grid_phi: int = 128

    # Quantum oracle check
    oracle_grid_theta: int = 16
    oracle_grid_phi: int = 32
    oracle_random_zetas: int = 20
    oracle_seed: int = 7
    check_tolerance: float = 1e-10

    class Config:
        env_file = ".env"
        case_sensitive = False

settings = Settings()
