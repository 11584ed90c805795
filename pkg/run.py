import os
import sys
from dotenv import load_dotenv
from addchain import create_app
from addchain.cli import run

# Load environment variables from .env file
load_dotenv()

# Also reachable as `flask --app run <command>`
config_name = os.environ.get('ADDCHAIN_CONFIG', 'config.Config')
app = create_app(config_name)

if __name__ == '__main__':
    sys.exit(run(sys.argv[1:]))
